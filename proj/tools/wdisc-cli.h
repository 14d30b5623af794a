// tools/wdisc-cli.h

// Copyright 2026  The wdisc Authors

// See ../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef WDISC_TOOLS_WDISC_CLI_H_
#define WDISC_TOOLS_WDISC_CLI_H_

namespace wdisc {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;  // unexpected failure (a bug)
inline constexpr int kExitValidation = 2;  // bad usage, input or parameters
inline constexpr int kExitIo = 3;  // a file could not be read or written

/// Entry point of the `wdisc` tool, separated from main() so tests can call
/// it in-process.
int RunCli(int argc, char **argv);

}  // namespace wdisc

#endif  // WDISC_TOOLS_WDISC_CLI_H_
