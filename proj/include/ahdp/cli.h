// Copyright 2026 The AHDP Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Subcommands:
//   sum | count | mean | freq | regress | sample-mech   one mechanism run
//   audit                                               density-ratio audits
//   power                                               adversary power
//   gen-data                                            synthetic datasets
//   sweep mean | freq | regress                         error sweeps
//
// Global flags: --seed, --config <file> (flat key=value lines whose keys are
// flag names; a flag on the command line wins over the file, which wins over
// the default) and, in builds with AHDP_CLI_AUDIT_MODE, --audit-mode.
// Every JSON result carries the fully resolved configuration under "config".

#ifndef AHDP_CLI_H_
#define AHDP_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace ahdp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAuditFailure = 2;

// `args` excludes the program name. JSON goes to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace ahdp

#endif  // AHDP_CLI_H_
