#include "cli.hpp"

int main(int argc, char** argv) { return facets::cli::run(argc, argv); }
