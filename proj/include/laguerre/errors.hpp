#pragma once

#include <stdexcept>
#include <string>

namespace laguerre {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A gamma function or Pochhammer divisor hits a pole.
class PoleError : public Error {
public:
    using Error::Error;
};

// Hypergeometric series outside its convergence domain.
class DivergenceError : public Error {
public:
    using Error::Error;
};

class NonConvergedError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class CollisionError : public Error {
public:
    using Error::Error;
};

class GridMismatchError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class SingularStateError : public Error {
public:
    using Error::Error;
};

}  // namespace laguerre
