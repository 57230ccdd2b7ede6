#pragma once

#include <stdexcept>
#include <string>

namespace rlwfem {

/** Runtime numerical failure: singular factorization, rejected relaxation root, etc.
 *  Configuration/precondition violations throw std::invalid_argument instead. */
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rlwfem
