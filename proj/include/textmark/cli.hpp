#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace textmark {

inline constexpr const char* kInsertSchema = "textmark.insert.v1";
inline constexpr const char* kDetectSchema = "textmark.detect.v1";
inline constexpr const char* kEvalSchema = "textmark.eval.v1";
inline constexpr const char* kTimeSchema = "textmark.time.v1";

// Exit codes: 0 success, 1 usage, 2 resource or model, 3 data.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace textmark
