#pragma once

#include <stdexcept>
#include <string>

namespace whitneypot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A wall-crossing or substitution left a genuine (1+v) denominator.
class NotLaurent : public Error {
 public:
  using Error::Error;
};

class NotDivisible : public Error {
 public:
  using Error::Error;
};

class CongruenceViolation : public Error {
 public:
  using Error::Error;
};

class MissingP1 : public Error {
 public:
  using Error::Error;
};

// Malformed input: bad text, det != 1 basis change, non-Markov triple, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace whitneypot
