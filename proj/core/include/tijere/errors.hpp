#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tijere {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with input data (corpus records, instances, files). The CLI maps
// these to exit status 1.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what,
                     std::optional<std::size_t> record = std::nullopt)
      : Error(record ? "record " + std::to_string(*record) + ": " + what : what),
        record_(record) {}

  std::optional<std::size_t> record() const { return record_; }

 private:
  std::optional<std::size_t> record_;
};

#define TIJERE_DATA_ERROR(Name)   \
  class Name : public DataError { \
   public:                        \
    using DataError::DataError;   \
  }

TIJERE_DATA_ERROR(MalformedDocument);
TIJERE_DATA_ERROR(SchemaError);
TIJERE_DATA_ERROR(SpanError);
TIJERE_DATA_ERROR(LabelError);
TIJERE_DATA_ERROR(IndexError);
TIJERE_DATA_ERROR(UnknownRelation);
TIJERE_DATA_ERROR(OverlapError);
TIJERE_DATA_ERROR(LengthError);
TIJERE_DATA_ERROR(DuplicatePairError);
TIJERE_DATA_ERROR(EmptyInput);
TIJERE_DATA_ERROR(CheckpointError);

#undef TIJERE_DATA_ERROR

// Runtime/model failures. The CLI maps these to exit status 3.
class IdOutOfRange : public Error {
 public:
  using Error::Error;
};
class EmptyMask : public Error {
 public:
  using Error::Error;
};
class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};
class ModelNotLoaded : public Error {
 public:
  using Error::Error;
};
class UnknownFormat : public Error {
 public:
  using Error::Error;
};

}  // namespace tijere
