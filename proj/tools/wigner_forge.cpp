#include "wigner_forge/cli.hpp"

int main(int argc, char** argv) { return wigner_forge::run(argc, argv); }
