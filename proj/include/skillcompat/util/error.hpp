#pragma once

#include <stdexcept>
#include <string>

namespace skillcompat {

// Base for every error the library throws on contract violations or I/O.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IllegalMoveError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Raised by agents (builtin or external) when they cannot produce a move or
// evaluation. Game runners catch it and flag the game as aborted.
class AgentError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

}  // namespace skillcompat
