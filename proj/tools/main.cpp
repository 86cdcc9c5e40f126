#include "ptqm/cli.hpp"

int main(int argc, char** argv) { return ptqm::cli::dispatch(argc, argv); }
