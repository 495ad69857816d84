#include "bn/scalar.hpp"

#include <sstream>

namespace bn {

std::string to_string(const Scalar& s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& s) {
    if (s.im == 0) return os << s.re;
    if (s.re == 0) return os << s.im << "*i";
    os << "(" << s.re;
    if (s.im > 0) os << "+" << s.im;
    else os << "-" << -s.im;
    return os << "*i)";
}

}  // namespace bn
