#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cvx/discrete_function.hpp"

namespace cvx {

// Function file format: line 1 holds n, then one value per line (integer,
// "p/q" or decimal). Lines starting with '#' and blank lines are ignored.

inline DiscreteFunction read_function(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    tokens.push_back(line.substr(start, end - start + 1));
  }
  if (tokens.empty()) throw std::runtime_error("function file: missing size line");
  long n = 0;
  try {
    std::size_t used = 0;
    n = std::stol(tokens[0], &used);
    if (used != tokens[0].size()) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    throw std::runtime_error("function file: bad size line '" + tokens[0] + "'");
  }
  if (n < 1) throw std::runtime_error("function file: size must be positive");
  if (static_cast<long>(tokens.size()) - 1 != n)
    throw std::runtime_error("function file: expected " + std::to_string(n) + " values, got " +
                             std::to_string(tokens.size() - 1));
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(n));
  for (long i = 1; i <= n; ++i) values.push_back(Rational::parse(tokens[static_cast<std::size_t>(i)]));
  return DiscreteFunction(std::move(values));
}

inline void write_function(std::ostream& out, const DiscreteFunction& f) {
  out << f.n() << "\n";
  for (const Rational& v : f.values()) out << v.to_string() << "\n";
}

inline DiscreteFunction load_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open function file: " + path);
  return read_function(in);
}

inline void save_function(const std::string& path, const DiscreteFunction& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write function file: " + path);
  write_function(out, f);
}

inline std::string function_to_string(const DiscreteFunction& f) {
  std::ostringstream os;
  write_function(os, f);
  return os.str();
}

inline DiscreteFunction function_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_function(is);
}

}  // namespace cvx
