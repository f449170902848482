// include/longalign/subprocess.h

// Copyright 2026  longalign authors

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

#ifndef LONGALIGN_SUBPROCESS_H_
#define LONGALIGN_SUBPROCESS_H_

#include <chrono>
#include <map>
#include <string>
#include <string_view>

namespace longalign {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
  std::string out;
  std::string err;

  bool ok() const { return !timed_out && exit_code == 0; }
};

// Runs `command` through /bin/sh -c in its own process group, feeding
// `input` on stdin. On timeout the whole group is killed.
ProcessResult RunCommand(const std::string &command, std::string_view input,
                         std::chrono::milliseconds timeout);

std::string ShellQuote(std::string_view s);

// Replaces {name} placeholders with shell-quoted values. Placeholders with no
// matching variable are left untouched.
std::string ExpandCommand(const std::string &tmpl,
                          const std::map<std::string, std::string> &vars);

// First word of a command template, for startup validation and provenance.
std::string CommandProgram(const std::string &tmpl);

// True when the program is an executable path or resolves through $PATH.
bool ProgramResolvable(const std::string &program);

}  // namespace longalign

#endif  // LONGALIGN_SUBPROCESS_H_
