#include "gabor/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gabor/errors.hpp"

namespace gabor::io {

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string grid_to_csv(const CoefficientGrid& grid) {
    const Lattice& lat = grid.lattice;
    std::string out = "k,n,re,im\n";
    for (int k = lat.k_min; k <= lat.k_max; ++k)
        for (int n = lat.n_min; n <= lat.n_max; ++n) {
            const cplx& v = grid.at(k, n);
            out += std::to_string(k);
            out += ',';
            out += std::to_string(n);
            out += ',';
            out += format17(v.real());
            out += ',';
            out += format17(v.imag());
            out += '\n';
        }
    return out;
}

void write_grid_csv(const std::filesystem::path& path, const CoefficientGrid& grid) {
    atomic_write_text(path, grid_to_csv(grid));
}

std::string grid_sidecar_json(const CoefficientGrid& grid) {
    nlohmann::json j;
    j["alpha"] = grid.lattice.alpha;
    j["beta"] = grid.lattice.beta;
    j["k_range"] = {grid.lattice.k_min, grid.lattice.k_max};
    j["n_range"] = {grid.lattice.n_min, grid.lattice.n_max};
    j["signal_id"] = grid.signal_id;
    j["window_id"] = grid.window_id;
    return j.dump(2) + "\n";
}

void write_grid_sidecar(const std::filesystem::path& path, const CoefficientGrid& grid) {
    atomic_write_text(path, grid_sidecar_json(grid));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("CSV line " + std::to_string(line_no) + ": bad " + what + " '" + s +
                          "'");
    }
}

int parse_int(const std::string& s, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("CSV line " + std::to_string(line_no) + ": bad " + what + " '" + s +
                          "'");
    }
}

}  // namespace

CoefficientGrid read_grid(const std::filesystem::path& csv_path,
                          const std::filesystem::path& sidecar_path) {
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_text(sidecar_path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("sidecar '" + sidecar_path.string() + "': " + e.what());
    }
    Lattice lat;
    try {
        lat = Lattice(meta.at("alpha").get<double>(), meta.at("beta").get<double>(),
                      meta.at("k_range").at(0).get<int>(), meta.at("k_range").at(1).get<int>(),
                      meta.at("n_range").at(0).get<int>(), meta.at("n_range").at(1).get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("sidecar '" + sidecar_path.string() + "': " + e.what());
    }
    CoefficientGrid grid(lat, meta.value("signal_id", ""), meta.value("window_id", ""));

    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open '" + csv_path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    std::vector<bool> seen(lat.node_count(), false);
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (split_csv_line(line) != std::vector<std::string>{"k", "n", "re", "im"})
                throw ConfigError("CSV line 1: expected header 'k,n,re,im'");
            continue;
        }
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 4)
            throw ConfigError("CSV line " + std::to_string(line_no) + ": expected 4 columns, got " +
                              std::to_string(cells.size()));
        int k = parse_int(cells[0], line_no, "k");
        int n = parse_int(cells[1], line_no, "n");
        if (k < lat.k_min || k > lat.k_max || n < lat.n_min || n > lat.n_max)
            throw ConfigError("CSV line " + std::to_string(line_no) + ": index (" +
                              std::to_string(k) + "," + std::to_string(n) +
                              ") outside declared lattice ranges");
        grid.at(k, n) = cplx(parse_double(cells[2], line_no, "re"),
                             parse_double(cells[3], line_no, "im"));
        seen[lat.index(k, n)] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw ConfigError("grid CSV '" + csv_path.string() +
                              "': missing rows for some lattice nodes");
    return grid;
}

std::vector<std::pair<double, double>> read_two_column_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) continue;  // header
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw ConfigError("CSV line " + std::to_string(line_no) + ": expected 2 columns");
        rows.emplace_back(parse_double(cells[0], line_no, "t"),
                          parse_double(cells[1], line_no, "value"));
    }
    if (rows.size() < 2)
        throw ConfigError("sampled CSV '" + path.string() + "': need at least 2 data rows");
    return rows;
}

}  // namespace gabor::io
