#ifndef CIQA_CLI_CLI_H_
#define CIQA_CLI_CLI_H_

namespace ciqa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point of the confusion_iqa tool. Data goes to files or stdout,
// progress and errors to stderr. Every invocation appends one JSON line to
// the run log.
int RunCli(int argc, const char* const* argv);

}  // namespace ciqa

#endif  // CIQA_CLI_CLI_H_
