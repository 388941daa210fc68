#include "nhtls/app/cli.hpp"

int main(int argc, char** argv) { return nhtls::app::main(argc, argv); }
