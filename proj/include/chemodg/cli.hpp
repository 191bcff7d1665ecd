#ifndef CHEMODG_CLI_HPP
#define CHEMODG_CLI_HPP

namespace chemodg {

// Entry point behind the chemodg binary; never throws.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace chemodg

#endif
