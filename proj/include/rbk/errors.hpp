#ifndef RBK_ERRORS_HPP
#define RBK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rbk {

// Invalid run configuration (bad file, bad parameters). CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive step size underflowed dt_min under persistent rejection.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(double t, const std::string& what) : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace rbk

#endif
