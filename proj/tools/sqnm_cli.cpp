#include "sqnm/cli/app.hpp"

int main(int argc, char** argv) { return sqnm::cli::main(argc, argv); }
