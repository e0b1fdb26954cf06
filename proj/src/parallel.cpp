#include "sievelab/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sievelab {

std::size_t parse_worker_count(const char* text) {
  const std::string s = text ? text : "";
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size() || value < 1)
    throw std::invalid_argument("SIEVELAB_THREADS must be a positive integer, got '" + s + "'");
  return static_cast<std::size_t>(value);
}

std::size_t worker_count() {
  if (const char* env = std::getenv("SIEVELAB_THREADS"); env && *env)
    return parse_worker_count(env);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace sievelab
