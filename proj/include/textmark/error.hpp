#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace textmark {

enum class ErrorCode {
  FileNotFound,
  MalformedHeader,
  TruncatedVector,
  DimensionMismatch,
  EmptyVocabulary,
  DuplicateWord,
  ZeroVector,
  WordNotInVocabulary,
  TaggerModelMissing,
  MalformedModel,
  ModelLoadFailure,
  UnsupportedModelSignature,
  EmptyEncodable,
  EmptySentence,
  EmptyCollection,
  EmptyDataset,
  AttackTooSevere,
  MissingPool,
  PoolTooSmall,
  MalformedData,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// Process exit code for the CLI: 2 for resource/model problems, 3 for bad input data.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace textmark
