#pragma once

#include <stdexcept>
#include <string>

namespace dimerlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoPerfectMatching : Error {
  using Error::Error;
};
struct NonFiniteWeight : Error {
  using Error::Error;
};
struct NotBipartite : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct MalformedMatching : Error {
  using Error::Error;
};
struct InsufficientData : Error {
  using Error::Error;
};
struct DegenerateWindow : Error {
  using Error::Error;
};
struct NonConvergence : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace dimerlab
