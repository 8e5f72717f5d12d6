#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

inline std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the maturity binary against `store`; output is captured through files
// in `scratch`.
inline CliResult run_cli(const std::string& binary, const std::filesystem::path& store,
                         const std::vector<std::string>& args, const std::filesystem::path& scratch) {
  std::string cmd = shell_quote(binary) + " --store " + shell_quote(store.string());
  for (const auto& a : args) cmd += " " + shell_quote(a);
  const auto out = scratch / "cli.out";
  const auto err = scratch / "cli.err";
  cmd += " >" + shell_quote(out.string()) + " 2>" + shell_quote(err.string()) + " </dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_all(out);
  r.err = read_all(err);
  return r;
}

}  // namespace testing
