#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace l2e {

using BigInt = boost::multiprecision::cpp_int;

}  // namespace l2e
