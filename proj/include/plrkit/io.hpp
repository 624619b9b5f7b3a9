#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"
#include "plrkit/metric_space.hpp"

namespace plrkit {

using json = nlohmann::json;

/// Parses JSON text; syntax errors become InputError "<source>:<line>:<column>: ...".
json parse_json(const std::string& text, const std::string& source = "<input>");
json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Throws InputError if `j` is not an object or has a key outside `allowed`.
void require_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where);

double get_number(const json& j, const std::string& key, const std::string& where);
double get_number_or(const json& j, const std::string& key, double fallback, const std::string& where);
Vector get_vector(const json& j, const std::string& key, const std::string& where);
Vector to_vector(const json& j, const std::string& where);
json vector_to_json(const Vector& v);

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

}  // namespace plrkit
