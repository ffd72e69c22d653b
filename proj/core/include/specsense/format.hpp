#ifndef SPECSENSE_FORMAT_HPP_
#define SPECSENSE_FORMAT_HPP_

#include <string>

namespace specsense {

// Locale-independent "%.9g" with "-inf"/"inf"/"nan" spellings; all CSV
// emissions share it so golden files are stable.
std::string format_g9(double v);

}  // namespace specsense

#endif  // SPECSENSE_FORMAT_HPP_
