#pragma once

#include <cstdint>
#include <random>

namespace ellest {

// Stream generator addressed by (seed, stream index). Replication k of an
// experiment always draws from stream k, whatever thread runs it.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  // Uniform on the open interval (0,1), 53 bits.
  double uniform();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ellest
