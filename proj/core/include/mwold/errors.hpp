#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mwold {

/// Malformed arguments: dimension mismatches, out-of-range indices, wrong lengths.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold for the given input.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two inputs of a joint diagonalization fail to commute.
class CommutatorError : public PreconditionError {
 public:
  CommutatorError(std::size_t first, std::size_t second, double norm);

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  double commutator_norm() const noexcept { return norm_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double norm_;
};

/// The weight polynomial of some spectral atom is not positive on the integers.
class CompletionInfeasible : public std::runtime_error {
 public:
  CompletionInfeasible(std::size_t atom, std::int64_t witness);

  std::size_t atom() const noexcept { return atom_; }
  std::int64_t witness() const noexcept { return witness_; }

 private:
  std::size_t atom_;
  std::int64_t witness_;
};

/// Weight data whose m-th forward differences of the Gramian sequence do not vanish.
class NotMIsometric : public std::runtime_error {
 public:
  NotMIsometric(std::size_t m, double max_difference);

  std::size_t m() const noexcept { return m_; }
  double max_difference() const noexcept { return max_difference_; }

 private:
  std::size_t m_;
  double max_difference_;
};

/// The wandering ladder of an operator does not support a shift model.
class NotShiftEquivalent : public std::runtime_error {
 public:
  NotShiftEquivalent(std::string clause, double residual);

  const std::string& clause() const noexcept { return clause_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string clause_;
  double residual_;
};

}  // namespace mwold
