#pragma once

#include <stdexcept>
#include <string>

namespace metascope {

/// Base class for every domain error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

/// Reader ran out of bytes mid-field. Parsers translate this into their own
/// malformed-input error so callers see one error family per format.
struct TruncatedInput : Error {
    using Error::Error;
};

/// A length prefix used a longer form than its value requires.
struct NonCanonicalEncoding : Error {
    using Error::Error;
};

struct MalformedTransaction : Error {
    using Error::Error;
};

/// Extended (witness) serialization is recognized but not supported.
struct WitnessUnsupported : MalformedTransaction {
    using MalformedTransaction::MalformedTransaction;
};

struct MalformedScript : Error {
    using Error::Error;
};

struct RegistryParseError : Error {
    RegistryParseError(int line, const std::string& what)
        : Error("registry line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

struct DuplicateEntry : Error {
    using Error::Error;
};

struct ProfileParseError : Error {
    ProfileParseError(int line, const std::string& what)
        : Error("profile line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

struct CorpusParseError : Error {
    CorpusParseError(int line, const std::string& what)
        : Error("corpus line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

struct SourceUnreachable : Error {
    using Error::Error;
};

struct RangeTooLarge : Error {
    using Error::Error;
};

struct MalformedResponse : Error {
    using Error::Error;
};

struct InvalidPoint : Error {
    using Error::Error;
};

struct DegenerateHash : Error {
    using Error::Error;
};

struct ZeroResult : Error {
    using Error::Error;
};

struct EntropyUnavailable : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace metascope
