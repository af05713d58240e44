#include "sinebeta/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sinebeta/errors.hpp"

namespace sinebeta::io {

std::string hex(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw InvalidArgument("cannot parse number: '" + s + "'");
    return v;
}

void write_text(std::ostream& out, const PointConfiguration& c) {
    out << "# window " << hex(c.window_lo()) << ' ' << hex(c.window_hi()) << '\n';
    for (double p : c.points()) out << hex(p) << '\n';
}

PointConfiguration read_text(std::istream& in) {
    std::string line;
    double lo = 0.0, hi = 0.0;
    bool have_window = false;
    std::vector<double> pts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string key, a, b;
            ss >> key >> a >> b;
            if (key == "window") {
                lo = parse_double(a);
                hi = parse_double(b);
                have_window = true;
            }
            continue;
        }
        pts.push_back(parse_double(line));
    }
    if (!have_window) throw InvalidArgument("configuration text is missing the window header");
    return PointConfiguration(std::move(pts), lo, hi);
}

void save_text(const std::string& path, const PointConfiguration& c) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot open for writing: " + path);
    write_text(out, c);
}

PointConfiguration load_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open for reading: " + path);
    return read_text(in);
}

nlohmann::json to_json(const PointConfiguration& c) {
    nlohmann::json pts = nlohmann::json::array();
    for (double p : c.points()) pts.push_back(hex(p));
    return {{"window", {hex(c.window_lo()), hex(c.window_hi())}}, {"points", pts}};
}

PointConfiguration from_json(const nlohmann::json& j) {
    auto num = [](const nlohmann::json& v) {
        return v.is_string() ? parse_double(v.get<std::string>()) : v.get<double>();
    };
    std::vector<double> pts;
    for (const auto& v : j.at("points")) pts.push_back(num(v));
    return PointConfiguration(std::move(pts), num(j.at("window").at(0)), num(j.at("window").at(1)));
}

}  // namespace sinebeta::io
