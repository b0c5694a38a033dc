#include "ttstar/cli.hpp"

int main(int argc, char** argv) { return ttstar::cli::run(std::vector<std::string>(argv + 1, argv + argc)); }
