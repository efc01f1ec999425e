#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aoi {

// Raised by analysis entry points when some node has rho >= 1: the queues
// have no stationary regime and the closed forms do not apply.
class UnstableError : public std::runtime_error {
 public:
  explicit UnstableError(std::vector<int> nodes)
      : std::runtime_error(format(nodes)), nodes_(std::move(nodes)) {}

  const std::vector<int>& nodes() const { return nodes_; }

 private:
  static std::string format(const std::vector<int>& nodes) {
    std::string msg = "unstable configuration, rho >= 1 at node(s)";
    for (int n : nodes) msg += " " + std::to_string(n);
    return msg;
  }

  std::vector<int> nodes_;
};

// Raised for operations outside the supported model, e.g. the PAoI tail
// bound with a nonzero erasure probability.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aoi
