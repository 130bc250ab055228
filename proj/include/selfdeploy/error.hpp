#pragma once

#include <stdexcept>
#include <string>

namespace selfdeploy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace selfdeploy
