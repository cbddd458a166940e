#include "qball/cli.hpp"

int main(int argc, char** argv) { return qball::cli::run_main(argc, argv); }
