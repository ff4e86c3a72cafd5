#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oriented {

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad descriptor, out-of-range weight, unparsable text.
class InputError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

class NonConfluentPresentation : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

class IllDefinedMap : public AlgebraError {
 public:
  IllDefinedMap(std::size_t relation, const std::string& what)
      : AlgebraError(what), relation_index(relation) {}
  std::size_t relation_index;
};

class NotSymmetric : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

class NonDivisibleBase : public AlgebraError {
 public:
  NonDivisibleBase(int w, const std::string& what) : AlgebraError(what), weight(w) {}
  int weight;
};

class UndecidableTower : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

}  // namespace oriented
