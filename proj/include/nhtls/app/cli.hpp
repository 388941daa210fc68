// cli.hpp: command-line entry point (run, verify, sweep, preset).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nhtls::app {

// Parses argv and dispatches; returns the process exit code.
int main(int argc, char** argv);

// Same, with explicit streams; args excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nhtls::app
