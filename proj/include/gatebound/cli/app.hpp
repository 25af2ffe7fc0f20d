#pragma once

namespace gatebound::cli {

/// Full command line: global flags, the command name, then --key value
/// parameters. Returns the process exit code.
int main_entry(int argc, char** argv);

} // namespace gatebound::cli
