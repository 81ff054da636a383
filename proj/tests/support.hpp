#pragma once

#include <string>

#include "cactus/divisor.hpp"

namespace test_support {

inline std::string data_path(const std::string& name) { return std::string(CACTUS_TEST_DATA) + "/" + name; }

inline cactus::GraphPtr graph(const std::string& name) { return cactus::load_graph(data_path(name)); }

inline cactus::Rational q(const char* text) { return cactus::parse_rational(text); }

inline cactus::PointRef pt(const cactus::GraphPtr& g, const char* text) { return cactus::parse_point(*g, text); }

inline cactus::Divisor div(const cactus::GraphPtr& g, const std::string& text) { return cactus::parse_divisor(g, text); }

}  // namespace test_support
