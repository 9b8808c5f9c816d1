#include "textmark/error.hpp"

namespace textmark {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedVector: return "TruncatedVector";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::DuplicateWord: return "DuplicateWord";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::WordNotInVocabulary: return "WordNotInVocabulary";
    case ErrorCode::TaggerModelMissing: return "TaggerModelMissing";
    case ErrorCode::MalformedModel: return "MalformedModel";
    case ErrorCode::ModelLoadFailure: return "ModelLoadFailure";
    case ErrorCode::UnsupportedModelSignature: return "UnsupportedModelSignature";
    case ErrorCode::EmptyEncodable: return "EmptyEncodable";
    case ErrorCode::EmptySentence: return "EmptySentence";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::AttackTooSevere: return "AttackTooSevere";
    case ErrorCode::MissingPool: return "MissingPool";
    case ErrorCode::PoolTooSmall: return "PoolTooSmall";
    case ErrorCode::MalformedData: return "MalformedData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySentence:
    case ErrorCode::EmptyCollection:
    case ErrorCode::EmptyDataset:
    case ErrorCode::EmptyEncodable:
    case ErrorCode::MalformedData:
    case ErrorCode::AttackTooSevere:
    case ErrorCode::PoolTooSmall:
      return 3;
    case ErrorCode::InvalidArgument:
      return 1;
    default:
      return 2;
  }
}

}  // namespace textmark
