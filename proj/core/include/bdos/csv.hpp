#ifndef BDOS_CSV_HPP
#define BDOS_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace bdos::csv {

//! All floating-point CSV output uses 9 significant digits so regression
//! comparisons are byte-stable.
std::string format(double value);
std::string format(long long value);

//! Splits one CSV line on commas. The file formats used here never quote.
std::vector<std::string> split_line(std::string_view line);

//! Locale-independent double parse of a full field; throws on trailing junk.
double parse_double(std::string_view field);

}  // namespace bdos::csv

#endif
