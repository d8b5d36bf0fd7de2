// report.hpp
// Minimal ordered JSON document builder. Keys keep insertion order and
// doubles render with 15 significant digits, so serialization is a pure
// function of the inserted values and reruns produce identical bytes.

#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symket/density.hpp"

namespace symket {

class JsonValue {
 public:
  static JsonValue null() { return JsonValue(Kind::Null); }
  static JsonValue boolean(bool value) {
    JsonValue v(Kind::Bool);
    v.bool_ = value;
    return v;
  }
  static JsonValue integer(long long value) {
    JsonValue v(Kind::Int);
    v.int_ = value;
    return v;
  }
  static JsonValue number(double value) {
    JsonValue v(Kind::Double);
    v.double_ = value;
    return v;
  }
  static JsonValue string(std::string value) {
    JsonValue v(Kind::String);
    v.string_ = std::move(value);
    return v;
  }
  static JsonValue array() { return JsonValue(Kind::Array); }
  static JsonValue object() { return JsonValue(Kind::Object); }

  JsonValue& push_back(JsonValue value) {
    items_.push_back(std::move(value));
    return items_.back();
  }

  JsonValue& set(std::string key, JsonValue value) {
    members_.emplace_back(std::move(key), std::move(value));
    return members_.back().second;
  }

  void write(std::ostream& out, int indent = 0) const {
    switch (kind_) {
      case Kind::Null:
        out << "null";
        break;
      case Kind::Bool:
        out << (bool_ ? "true" : "false");
        break;
      case Kind::Int:
        out << int_;
        break;
      case Kind::Double:
        out << format_double(double_);
        break;
      case Kind::String:
        write_escaped(out, string_);
        break;
      case Kind::Array:
        write_array(out, indent);
        break;
      case Kind::Object:
        write_object(out, indent);
        break;
    }
  }

  std::string dump() const {
    std::ostringstream out;
    write(out);
    out << "\n";
    return out.str();
  }

 private:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  explicit JsonValue(Kind kind) : kind_(kind) {}

  static void write_escaped(std::ostream& out, const std::string& text) {
    out << '"';
    for (char c : text) {
      switch (c) {
        case '"': out << "\\\""; break;
        case '\\': out << "\\\\"; break;
        case '\n': out << "\\n"; break;
        case '\t': out << "\\t"; break;
        case '\r': out << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buffer[8];
            std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
            out << buffer;
          } else {
            out << c;
          }
      }
    }
    out << '"';
  }

  static void write_indent(std::ostream& out, int indent) {
    for (int i = 0; i < indent; ++i) out << "  ";
  }

  void write_array(std::ostream& out, int indent) const {
    if (items_.empty()) {
      out << "[]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      write_indent(out, indent + 1);
      items_[i].write(out, indent + 1);
      if (i + 1 < items_.size()) out << ",";
      out << "\n";
    }
    write_indent(out, indent);
    out << "]";
  }

  void write_object(std::ostream& out, int indent) const {
    if (members_.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    for (std::size_t i = 0; i < members_.size(); ++i) {
      write_indent(out, indent + 1);
      write_escaped(out, members_[i].first);
      out << ": ";
      members_[i].second.write(out, indent + 1);
      if (i + 1 < members_.size()) out << ",";
      out << "\n";
    }
    write_indent(out, indent);
    out << "}";
  }

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;
};

}  // namespace symket
