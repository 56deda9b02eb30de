#pragma once

#include <stdexcept>
#include <string>

namespace pasv {

// Base class for all library errors. Callers that only need coarse
// dispatch (e.g. the CLI exit-code mapping) catch the subfamilies below.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- structural / input errors -------------------------------------------

class CycleDetected : public Error {
public:
    explicit CycleDetected(const std::string& what) : Error(what) {}
};

class IndexOutOfRange : public Error {
public:
    explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

class EmptySet : public Error {
public:
    explicit EmptySet(const std::string& what) : Error(what) {}
};

class SamePlayer : public Error {
public:
    explicit SamePlayer(const std::string& what) : Error(what) {}
};

class ExtensionCountExceedsCap : public Error {
public:
    explicit ExtensionCountExceedsCap(const std::string& what) : Error(what) {}
};

class NotGloballyMaximal : public Error {
public:
    explicit NotGloballyMaximal(const std::string& what) : Error(what) {}
};

class EmptySubset : public Error {
public:
    explicit EmptySubset(const std::string& what) : Error(what) {}
};

class SubsetNotInLayer : public Error {
public:
    explicit SubsetNotInLayer(const std::string& what) : Error(what) {}
};

class NotLinearExtension : public Error {
public:
    explicit NotLinearExtension(const std::string& what) : Error(what) {}
};

class NotMaximalInSet : public Error {
public:
    explicit NotMaximalInSet(const std::string& what) : Error(what) {}
};

class InfeasibleSet : public Error {
public:
    explicit InfeasibleSet(const std::string& what) : Error(what) {}
};

class ComparablePair : public Error {
public:
    explicit ComparablePair(const std::string& what) : Error(what) {}
};

class InvalidInit : public Error {
public:
    explicit InvalidInit(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// Generic contract violation (bad configuration values, malformed inputs)
// not covered by a more specific class.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// --- utility-layer errors --------------------------------------------------

class MissingSubset : public Error {
public:
    explicit MissingSubset(const std::string& what) : Error(what) {}
};

class BadCopyMap : public Error {
public:
    explicit BadCopyMap(const std::string& what) : Error(what) {}
};

class KTooLarge : public Error {
public:
    explicit KTooLarge(const std::string& what) : Error(what) {}
};

class EmptySamples : public Error {
public:
    explicit EmptySamples(const std::string& what) : Error(what) {}
};

class IncompleteGrouping : public Error {
public:
    explicit IncompleteGrouping(const std::string& what) : Error(what) {}
};

// External-process utility failures. These map to their own CLI exit code,
// so they share a dedicated base.
class UtilityProtocolError : public Error {
public:
    explicit UtilityProtocolError(const std::string& what) : Error(what) {}
};

class ProcessFailure : public UtilityProtocolError {
public:
    explicit ProcessFailure(const std::string& what) : UtilityProtocolError(what) {}
};

class ProtocolViolation : public UtilityProtocolError {
public:
    explicit ProtocolViolation(const std::string& what) : UtilityProtocolError(what) {}
};

class Timeout : public UtilityProtocolError {
public:
    explicit Timeout(const std::string& what) : UtilityProtocolError(what) {}
};

} // namespace pasv
