#pragma once

#include <cstddef>
#include <vector>

#include "cvx/discrete_function.hpp"

namespace cvx {

// Value-access wrapper at the tester/function boundary. Every query event is
// appended to the transcript, repeats included; repeated positions answer
// consistently because the underlying table is immutable.
class CountingOracle {
 public:
  explicit CountingOracle(const DiscreteFunction& f) : f_(&f) {}

  const Rational& query(int i) {
    transcript_.push_back(i);
    return f_->value(i);
  }

  int n() const { return f_->n(); }  // domain size is public, not a query
  const DiscreteFunction& function() const { return *f_; }

  std::size_t count() const { return transcript_.size(); }
  const std::vector<int>& transcript() const { return transcript_; }

 private:
  const DiscreteFunction* f_;
  std::vector<int> transcript_;
};

}  // namespace cvx
