#include "jolo/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "jolo/errors.hpp"

namespace jolo {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// parses "key=value" integer pairs out of a "# k1=v1 k2=v2" header line
int header_int(const std::string& line, const std::string& key, const std::string& path) {
    std::string pat = key + "=";
    size_t pos = line.find(pat);
    if (pos == std::string::npos)
        throw data_error(path + ": header line is missing '" + key + "='");
    try {
        return std::stoi(line.substr(pos + pat.size()));
    } catch (const std::exception&) {
        throw data_error(path + ": header value for '" + key + "' is not an integer");
    }
}

double parse_positive(const std::string& text, int lineno, const std::string& path) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty() && v > 0.0 && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw data_error(path + ":" + std::to_string(lineno) + ": expected a positive value, got '" +
                     trim(text) + "'");
}

} // namespace

Dataset ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open data file: " + path);
    Dataset d;
    d.label = path;
    std::string line;
    int lineno = 0;
    int m = -1, n = -1;
    bool saw_column_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (m < 0) {
                m = header_int(t, "m", path);
                n = header_int(t, "n", path);
            }
            continue;
        }
        auto comma = t.find(',');
        if (comma == std::string::npos)
            throw data_error(path + ":" + std::to_string(lineno) + ": expected 'sample,value'");
        std::string tag = trim(t.substr(0, comma));
        std::string val = t.substr(comma + 1);
        if (tag == "sample" && !saw_column_header) {
            saw_column_header = true;
            continue;
        }
        if (tag == "X")
            d.x.push_back(parse_positive(val, lineno, path));
        else if (tag == "Y")
            d.y.push_back(parse_positive(val, lineno, path));
        else
            throw data_error(path + ":" + std::to_string(lineno) +
                             ": sample tag must be X or Y, got '" + tag + "'");
    }
    if (d.x.empty() || d.y.empty())
        throw data_error(path + ": both samples must be nonempty");
    if (m >= 0 && (static_cast<size_t>(m) != d.x.size() || static_cast<size_t>(n) != d.y.size()))
        throw data_error(path + ": header sizes m=" + std::to_string(m) +
                         " n=" + std::to_string(n) + " do not match the rows (" +
                         std::to_string(d.x.size()) + ", " + std::to_string(d.y.size()) + ")");
    return d;
}

namespace {

// shortest decimal form that parses back to exactly the same double, so the
// CSV round-trip is lossless without littering files with trailing digits
std::string fmt_value(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

} // namespace

std::string dataset_to_csv(const Dataset& d) {
    std::string out = "# m=" + std::to_string(d.x.size()) + " n=" + std::to_string(d.y.size()) +
                      "\nsample,value\n";
    for (double v : d.x) out += "X," + fmt_value(v) + "\n";
    for (double v : d.y) out += "Y," + fmt_value(v) + "\n";
    return out;
}

void write_dataset(const Dataset& d, const std::string& path) {
    write_text_file(path, dataset_to_csv(d));
}

CensoredSample apply_joint_censoring(const Dataset& d, int r) {
    int m = static_cast<int>(d.x.size());
    int n = static_cast<int>(d.y.size());
    if (r < 1 || r > m + n)
        throw data_error("apply_joint_censoring: r must lie in [1, m+n]");
    struct Entry {
        double value;
        int origin;  // 0 = X, 1 = Y
        int index;
    };
    std::vector<Entry> pool;
    pool.reserve(static_cast<size_t>(m + n));
    for (int i = 0; i < m; ++i) pool.push_back({d.x[static_cast<size_t>(i)], 0, i});
    for (int j = 0; j < n; ++j) pool.push_back({d.y[static_cast<size_t>(j)], 1, j});
    std::sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.value, a.origin, a.index) < std::tie(b.value, b.origin, b.index);
    });
    std::vector<double> w(static_cast<size_t>(r));
    std::vector<int> nu(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
        w[static_cast<size_t>(i)] = pool[static_cast<size_t>(i)].value;
        nu[static_cast<size_t>(i)] = pool[static_cast<size_t>(i)].origin == 0 ? 1 : 0;
    }
    return CensoredSample(std::move(w), std::move(nu), m, n);
}

CensoredSample read_censored_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open censored-sample file: " + path);
    std::string line;
    int lineno = 0;
    int m = -1, n = -1, r = -1;
    std::vector<double> w;
    std::vector<int> nu;
    bool saw_column_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (m < 0) {
                m = header_int(t, "m", path);
                n = header_int(t, "n", path);
                r = header_int(t, "r", path);
            }
            continue;
        }
        std::stringstream ss(t);
        std::string c1, c2, c3;
        if (!std::getline(ss, c1, ',') || !std::getline(ss, c2, ',') || !std::getline(ss, c3))
            throw data_error(path + ":" + std::to_string(lineno) + ": expected 'index,w,nu'");
        if (trim(c1) == "index" && !saw_column_header) {
            saw_column_header = true;
            continue;
        }
        w.push_back(parse_positive(c2, lineno, path));
        std::string nv = trim(c3);
        if (nv != "0" && nv != "1")
            throw data_error(path + ":" + std::to_string(lineno) + ": nu must be 0 or 1");
        nu.push_back(nv == "1" ? 1 : 0);
    }
    if (m < 0) throw data_error(path + ": missing '# m=.. n=.. r=..' header");
    if (r != static_cast<int>(w.size()))
        throw data_error(path + ": header r=" + std::to_string(r) + " does not match " +
                         std::to_string(w.size()) + " rows");
    try {
        return CensoredSample(std::move(w), std::move(nu), m, n);
    } catch (const data_error& e) {
        throw data_error(path + ": " + e.what());
    }
}

std::string censored_to_csv(const CensoredSample& s) {
    std::string out = "# m=" + std::to_string(s.m) + " n=" + std::to_string(s.n) +
                      " r=" + std::to_string(s.r) + "\nindex,w,nu\n";
    for (int i = 0; i < s.r; ++i)
        out += std::to_string(i + 1) + "," + fmt_value(s.w[static_cast<size_t>(i)]) + "," +
               std::to_string(s.nu[static_cast<size_t>(i)]) + "\n";
    return out;
}

void write_censored_csv(const CensoredSample& s, const std::string& path) {
    write_text_file(path, censored_to_csv(s));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open output file: " + path);
    out << content;
    if (!out) throw data_error("write failed: " + path);
}

} // namespace jolo
