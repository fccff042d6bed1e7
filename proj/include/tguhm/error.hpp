#pragma once

#include <stdexcept>
#include <string>

namespace tguhm {

/// Bad or missing input data: malformed files, empty series, unknown ids.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller (index out of
/// range, c* < 1, unsorted change-points, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace tguhm
