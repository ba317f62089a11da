#include "causalperf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace causalperf {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

int Dataset::add_variable(const VariableMeta& meta) {
    if (rows_ > 0) throw InputError("cannot add variables after rows");
    if (index_.count(meta.name)) throw InputError("duplicate variable name: " + meta.name);
    if (meta.dtype == VarType::Discrete) {
        if (meta.levels.empty())
            throw InputError("discrete variable '" + meta.name + "' has no levels");
        std::set<std::string> uniq(meta.levels.begin(), meta.levels.end());
        if (uniq.size() != meta.levels.size())
            throw InputError("discrete variable '" + meta.name + "' has duplicate levels");
    }
    int id = static_cast<int>(vars_.size());
    vars_.push_back(meta);
    columns_.emplace_back();
    index_[meta.name] = id;
    return id;
}

int Dataset::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown variable: '" + name + "'");
    return it->second;
}

void Dataset::add_row(const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != variable_count())
        throw InputError("row width mismatch");
    for (int i = 0; i < variable_count(); ++i) {
        if (vars_[i].dtype == VarType::Discrete) {
            int lv = static_cast<int>(values[i]);
            if (lv < 0 || lv >= static_cast<int>(vars_[i].levels.size()) ||
                values[i] != static_cast<double>(lv))
                throw InputError("value out of declared levels for '" + vars_[i].name + "'");
        }
        columns_[i].push_back(values[i]);
    }
    ++rows_;
}

int Dataset::level(long row, int var) const {
    if (vars_.at(var).dtype != VarType::Discrete)
        throw InputError("level() on continuous variable '" + vars_.at(var).name + "'");
    return static_cast<int>(columns_.at(var).at(row));
}

int Dataset::level_count(int var) const {
    return static_cast<int>(vars_.at(var).levels.size());
}

void Dataset::validate() const {
    if (rows_ < 1) throw InputError("dataset is empty");
    for (int i = 0; i < variable_count(); ++i) {
        const auto& col = columns_[i];
        bool constant = true;
        for (long r = 1; r < rows_; ++r)
            if (col[r] != col[0]) {
                constant = false;
                break;
            }
        if (constant && rows_ > 1)
            throw DegenerateError("constant column '" + vars_[i].name +
                                  "' breaks independence testing");
    }
}

std::vector<VariableMeta> load_metadata(const std::string& meta_path) {
    std::ifstream in(meta_path);
    if (!in) throw InputError("cannot open metadata file: " + meta_path);
    std::vector<VariableMeta> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("var:", 0) != 0)
            throw ParseError("metadata line " + std::to_string(lineno) + ": expected 'var:'");
        std::istringstream fields(line.substr(4));
        VariableMeta meta;
        std::string tok;
        bool first = true;
        while (fields >> tok) {
            if (first) {
                meta.name = tok;
                first = false;
                continue;
            }
            size_t eq = tok.find('=');
            if (eq == std::string::npos)
                throw ParseError("metadata line " + std::to_string(lineno) + ": bad field '" +
                                 tok + "'");
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (key == "role") {
                if (val == "option") meta.role = NodeRole::Option;
                else if (val == "performance") meta.role = NodeRole::Performance;
                else
                    throw ParseError("metadata line " + std::to_string(lineno) +
                                     ": unknown role '" + val + "'");
            } else if (key == "dtype") {
                if (val == "discrete") meta.dtype = VarType::Discrete;
                else if (val == "continuous") meta.dtype = VarType::Continuous;
                else
                    throw ParseError("metadata line " + std::to_string(lineno) +
                                     ": unknown dtype '" + val + "'");
            } else if (key == "levels") {
                meta.levels = split(val, ',');
            } else if (key == "units") {
                meta.units = val;
            } else {
                throw ParseError("metadata line " + std::to_string(lineno) +
                                 ": unknown field '" + key + "'");
            }
        }
        if (meta.name.empty())
            throw ParseError("metadata line " + std::to_string(lineno) + ": missing name");
        out.push_back(meta);
    }
    return out;
}

Dataset load_dataset(const std::string& csv_path, const std::string& meta_path) {
    auto metas = load_metadata(meta_path);
    std::ifstream in(csv_path);
    if (!in) throw InputError("cannot open data file: " + csv_path);

    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty CSV file: " + csv_path);
    auto names = split(trim(header), ',');

    Dataset d;
    std::vector<int> meta_for_col;
    for (const auto& n : names) {
        auto it = std::find_if(metas.begin(), metas.end(),
                               [&](const VariableMeta& m) { return m.name == n; });
        if (it == metas.end())
            throw InputError("CSV column '" + n + "' missing from metadata");
        d.add_variable(*it);
    }

    std::string line;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != names.size())
            throw ParseError("CSV row " + std::to_string(lineno) + ": expected " +
                             std::to_string(names.size()) + " cells, got " +
                             std::to_string(cells.size()));
        std::vector<double> row(names.size());
        for (size_t c = 0; c < cells.size(); ++c) {
            std::string cell = unquote(cells[c]);
            if (cell.empty())
                throw ParseError("CSV row " + std::to_string(lineno) + ", column '" +
                                 names[c] + "': missing value");
            const VariableMeta& m = d.variable(static_cast<int>(c));
            if (m.dtype == VarType::Discrete) {
                auto lv = std::find(m.levels.begin(), m.levels.end(), cell);
                if (lv == m.levels.end())
                    throw ParseError("CSV row " + std::to_string(lineno) + ", column '" +
                                     names[c] + "': value '" + cell +
                                     "' not in declared levels");
                row[c] = static_cast<double>(lv - m.levels.begin());
            } else {
                try {
                    size_t pos = 0;
                    row[c] = std::stod(cell, &pos);
                    if (pos != cell.size()) throw std::invalid_argument(cell);
                } catch (const std::exception&) {
                    throw ParseError("CSV row " + std::to_string(lineno) + ", column '" +
                                     names[c] + "': non-numeric value '" + cell + "'");
                }
            }
        }
        d.add_row(row);
    }
    if (d.row_count() < 1) throw InputError("CSV has no data rows: " + csv_path);
    return d;
}

void save_dataset(const Dataset& d, const std::string& csv_path, const std::string& meta_path) {
    {
        std::ofstream out(csv_path);
        if (!out) throw InputError("cannot write data file: " + csv_path);
        for (int i = 0; i < d.variable_count(); ++i) {
            if (i) out << ",";
            out << d.variable(i).name;
        }
        out << "\n";
        out.precision(17);
        for (long r = 0; r < d.row_count(); ++r) {
            for (int i = 0; i < d.variable_count(); ++i) {
                if (i) out << ",";
                const auto& m = d.variable(i);
                if (m.dtype == VarType::Discrete) out << m.levels[d.level(r, i)];
                else out << d.value(r, i);
            }
            out << "\n";
        }
    }
    std::ofstream out(meta_path);
    if (!out) throw InputError("cannot write metadata file: " + meta_path);
    for (int i = 0; i < d.variable_count(); ++i) {
        const auto& m = d.variable(i);
        out << "var: " << m.name;
        if (m.role == NodeRole::Option) out << " role=option";
        if (m.role == NodeRole::Performance) out << " role=performance";
        out << " dtype=" << (m.dtype == VarType::Discrete ? "discrete" : "continuous");
        if (m.dtype == VarType::Discrete) {
            out << " levels=";
            for (size_t l = 0; l < m.levels.size(); ++l) {
                if (l) out << ",";
                out << m.levels[l];
            }
        }
        if (!m.units.empty()) out << " units=" << m.units;
        out << "\n";
    }
}

}  // namespace causalperf
