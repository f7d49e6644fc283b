#include "prefadvisor/matrix.hpp"

#include <algorithm>

namespace prefadvisor {

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

}  // namespace prefadvisor
