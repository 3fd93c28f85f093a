#include "vecirs/error.hpp"

#include <sstream>

namespace vecirs {

std::string Infeasibility::describe() const {
  std::ostringstream os;
  os << "infeasible: " << constraint;
  if (vehicle) os << " at vehicle " << *vehicle;
  os << " (value " << value << ", limit " << limit << ")";
  return os.str();
}

}  // namespace vecirs
