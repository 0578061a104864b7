#include "mwold/errors.hpp"

#include <sstream>

namespace mwold {

CommutatorError::CommutatorError(std::size_t first, std::size_t second, double norm)
    : PreconditionError([&] {
        std::ostringstream os;
        os << "matrices " << first << " and " << second << " do not commute (commutator norm " << norm << ")";
        return os.str();
      }()),
      first_(first),
      second_(second),
      norm_(norm) {}

CompletionInfeasible::CompletionInfeasible(std::size_t atom, std::int64_t witness)
    : std::runtime_error("completion infeasible: weight polynomial of atom " + std::to_string(atom) +
                         " is not positive at n = " + std::to_string(witness)),
      atom_(atom),
      witness_(witness) {}

NotMIsometric::NotMIsometric(std::size_t m, double max_difference)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "weights are not " << m << "-isometric: max |m-th difference| = " << max_difference;
        return os.str();
      }()),
      m_(m),
      max_difference_(max_difference) {}

NotShiftEquivalent::NotShiftEquivalent(std::string clause, double residual)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "no shift model: " << clause << " fails (residual " << residual << ")";
        return os.str();
      }()),
      clause_(std::move(clause)),
      residual_(residual) {}

}  // namespace mwold
