#pragma once

#include <stdexcept>
#include <string>

namespace selcomp {

/// Failure categories; each maps to a CLI exit code.
enum class ErrorKind {
    precondition,  // exit 2
    budget,        // exit 3
    network,       // exit 4
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept
    {
        switch (kind_) {
        case ErrorKind::precondition: return 2;
        case ErrorKind::budget: return 3;
        case ErrorKind::network: return 4;
        }
        return 1;
    }

private:
    ErrorKind kind_;
};

inline Error precondition_error(const std::string& what) { return Error(ErrorKind::precondition, what); }
inline Error budget_error(const std::string& what) { return Error(ErrorKind::budget, what); }
inline Error network_error(const std::string& what) { return Error(ErrorKind::network, what); }

}  // namespace selcomp
