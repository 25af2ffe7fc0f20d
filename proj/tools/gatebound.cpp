#include "gatebound/cli/app.hpp"

int main(int argc, char** argv) { return gatebound::cli::main_entry(argc, argv); }
