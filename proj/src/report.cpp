#include "minsurf/report.hpp"

#include <cmath>

#include "minsurf/io.hpp"

namespace minsurf::report {

namespace {

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789abcdef";
          out += "\\u00";
          out += hex[(c >> 4) & 0xf];
          out += hex[c & 0xf];
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_number(double x) { return std::isfinite(x) ? io::fmt(x) : "null"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string to_json(const std::vector<Entry>& entries) {
  if (entries.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    out += "  {\"id\": " + json_string(e.id) + ", \"paper_ref\": " + json_string(e.paper_ref) +
           ", \"measured\": " + json_number(e.measured) + ", \"threshold\": " + json_number(e.threshold) +
           ", \"pass\": " + (e.pass ? "true" : "false") + "}";
    out += k + 1 < entries.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

std::string to_csv(const std::vector<Entry>& entries) {
  std::string out = "id,paper_ref,measured,threshold,pass\n";
  for (const auto& e : entries)
    out += csv_field(e.id) + "," + csv_field(e.paper_ref) + "," + io::fmt(e.measured) + "," +
           io::fmt(e.threshold) + "," + (e.pass ? "true" : "false") + "\n";
  return out;
}

bool all_pass(const std::vector<Entry>& entries) {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

}  // namespace minsurf::report
