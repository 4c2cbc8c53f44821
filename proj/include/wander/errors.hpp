#pragma once

#include <stdexcept>
#include <string>

namespace wander {

// Root of every error the engine raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (limit 0, dt <= 0, empty turns...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Museum content failed validation. `entity` names the offending artwork,
// obstacle or field.
class ValidationError : public Error {
public:
    ValidationError(std::string entity, const std::string& what)
        : Error(entity + ": " + what), entity_(std::move(entity)) {}
    const std::string& entity() const { return entity_; }

private:
    std::string entity_;
};

class UnknownArtwork : public Error {
public:
    explicit UnknownArtwork(std::string id)
        : Error("unknown artwork '" + id + "'"), id_(std::move(id)) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class EmptyStatement : public Error {
public:
    EmptyStatement() : Error("preference statement is empty") {}
};

class MissingSlot : public Error {
public:
    explicit MissingSlot(std::string name)
        : Error("prompt slot '" + name + "' has no value"), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// Anything that went wrong talking to a chat backend.
class GatewayFailure : public Error {
public:
    using Error::Error;
};

class BackendTimeout : public GatewayFailure {
public:
    BackendTimeout() : GatewayFailure("chat backend timed out") {}
};

class BackendError : public GatewayFailure {
public:
    BackendError(int status, const std::string& what)
        : GatewayFailure("chat backend error (" + std::to_string(status) + "): " + what),
          status_(status) {}
    // HTTP status, or 0 when no response was received at all.
    int status() const { return status_; }

private:
    int status_;
};

class RepairFailed : public Error {
public:
    explicit RepairFailed(std::string raw)
        : Error("could not recover JSON from model output"), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

class NoResolvableTarget : public Error {
public:
    explicit NoResolvableTarget(std::string request)
        : Error("no navigation target for '" + request + "'"), request_(std::move(request)) {}
    const std::string& request() const { return request_; }

private:
    std::string request_;
};

class Unreachable : public Error {
public:
    explicit Unreachable(std::string artwork_id)
        : Error("no path to " + artwork_id), artwork_id_(std::move(artwork_id)) {}
    const std::string& artwork_id() const { return artwork_id_; }

private:
    std::string artwork_id_;
};

class DegenerateDirection : public Error {
public:
    DegenerateDirection() : Error("visitor and destination coincide") {}
};

}  // namespace wander
