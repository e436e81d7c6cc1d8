#include "facets/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace facets {

void ModelParams::validate() const {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("N must be an even integer >= 2");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be nonnegative");
    if (!(p_v > 0.0 && p_v < p_s && p_s < 1.0)) throw std::invalid_argument("need 0 < p_v < p_s < 1");
    if (!(A >= 0.0) || !std::isfinite(A)) throw std::invalid_argument("A must be nonnegative");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

HeightField::HeightField(int N) : n_(N), side_(2 * N - 1) {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("height field needs an even N >= 2");
    h_.assign(static_cast<std::size_t>(side_) * side_, 0);
}

void HeightField::set(int i, int j, int value) {
    if (!inside(i, j)) throw std::out_of_range("cell outside the box interior");
    if (!in_range(value)) throw std::out_of_range("height " + std::to_string(value) + " outside [-N/2, N/2]");
    h_[static_cast<std::size_t>(index(i, j))] = value;
}

std::int64_t gradient_sum(const HeightField& field) {
    const int L = field.side();
    std::int64_t total = 0;
    // bonds to the east and north of every cell, plus the west and south boundary
    for (int j = 0; j < L; ++j) {
        for (int i = 0; i < L; ++i) {
            const int h = field.at(i, j);
            total += std::abs(h - field.at(i + 1, j));
            total += std::abs(h - field.at(i, j + 1));
        }
    }
    for (int k = 0; k < L; ++k) {
        total += std::abs(field.at(0, k));
        total += std::abs(field.at(k, 0));
    }
    return total;
}

double sos_energy(const HeightField& field, double beta) { return beta * static_cast<double>(gradient_sum(field)); }

std::int64_t signed_volume(const HeightField& field) {
    std::int64_t total = 0;
    for (const int h : field.values()) total += h;
    return total;
}

int local_gradient_change(const HeightField& field, int idx, int d) {
    const int L = field.side();
    const int i = idx % L;
    const int j = idx / L;
    const int h = field[idx];
    int change = 0;
    for (const int n : {field.at(i - 1, j), field.at(i + 1, j), field.at(i, j - 1), field.at(i, j + 1)}) {
        change += std::abs(h + d - n) - std::abs(h - n);
    }
    return change;
}

std::string_view to_string(TailMode mode) { return mode == TailMode::exact ? "exact" : "gaussian"; }

TailMode parse_tail_mode(std::string_view tag) {
    if (tag == "gaussian") return TailMode::gaussian;
    if (tag == "exact") return TailMode::exact;
    throw std::invalid_argument("unknown tail mode '" + std::string(tag) + "'");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

std::vector<double> log_binomial_pmf(std::int64_t n, double p) {
    std::vector<double> out(static_cast<std::size_t>(n + 1));
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double ln = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::int64_t k = 0; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        out[static_cast<std::size_t>(k)] =
            ln - std::lgamma(kk + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0) + kk * lp + static_cast<double>(n - k) * lq;
    }
    return out;
}

}  // namespace

double exact_log_tail(std::int64_t n_s, double p_s, std::int64_t n_v, double p_v, std::int64_t T) {
    if (n_s < 0 || n_v < 0) throw std::invalid_argument("binomial sizes must be nonnegative");
    if (T <= 0) return 0.0;
    if (T > n_s + n_v) return kNegInf;
    const std::vector<double> px = log_binomial_pmf(n_s, p_s);
    const std::vector<double> py = log_binomial_pmf(n_v, p_v);
    // survival of the second binomial: sy[t] = log P(Y >= t)
    std::vector<double> sy(static_cast<std::size_t>(n_v + 2), kNegInf);
    for (std::int64_t t = n_v; t >= 0; --t) {
        sy[static_cast<std::size_t>(t)] = log_add(sy[static_cast<std::size_t>(t + 1)], py[static_cast<std::size_t>(t)]);
    }
    double total = kNegInf;
    for (std::int64_t x = 0; x <= n_s; ++x) {
        const std::int64_t need = T - x;
        if (need > n_v) continue;
        const double tail = need <= 0 ? 0.0 : sy[static_cast<std::size_t>(need)];
        total = log_add(total, px[static_cast<std::size_t>(x)] + tail);
    }
    return std::min(total, 0.0);
}

double bulk_log_tail(const ModelParams& params, std::int64_t alpha, TailMode mode) {
    const double N = params.N;
    if (mode == TailMode::gaussian) {
        const double gap = std::max(0.0, params.A * N * N - params.Delta() * static_cast<double>(alpha));
        return -gap * gap / (2.0 * N * N * N * params.R());
    }
    const std::int64_t side = 2 * static_cast<std::int64_t>(params.N) - 1;
    const std::int64_t volume = side * side * params.N;
    if (static_cast<double>(volume) > kExactTailMaxVolume) {
        throw std::invalid_argument("exact tail limited to volumes <= 1e6 cells; use gaussian mode");
    }
    const std::int64_t v0 = volume / 2;
    if (alpha > v0 || alpha < -v0) throw std::out_of_range("signed volume exceeds the box");
    const auto T = static_cast<std::int64_t>(std::ceil((params.p_s + params.p_v) * static_cast<double>(v0) + params.A * N * N - 1e-9));
    return exact_log_tail(v0 + alpha, params.p_s, v0 - alpha, params.p_v, T);
}

void write_height_field(std::ostream& out, const HeightField& field) {
    out << "N=" << field.N() << "\n";
    const int L = field.side();
    for (int j = 0; j < L; ++j) {
        for (int i = 0; i < L; ++i) {
            if (i) out << ',';
            out << field.at(i, j);
        }
        out << "\n";
    }
}

HeightField read_height_field(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("N=", 0) != 0) throw std::runtime_error("height field CSV must start with N=<n>");
    int N = 0;
    try {
        N = std::stoi(line.substr(2));
    } catch (const std::exception&) {
        throw std::runtime_error("bad height field header: " + line);
    }
    HeightField field(N);
    const int L = field.side();
    for (int j = 0; j < L; ++j) {
        if (!std::getline(in, line)) throw std::runtime_error("height field CSV is truncated");
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        for (int i = 0; i < L; ++i) {
            int v = 0;
            if (!(row >> v)) throw std::runtime_error("height field row " + std::to_string(j) + " is short");
            if (!field.in_range(v)) throw std::runtime_error("height out of range in row " + std::to_string(j));
            field.set(i, j, v);
        }
    }
    return field;
}

}  // namespace facets
