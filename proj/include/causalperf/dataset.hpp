#pragma once

#include <string>
#include <variant>
#include <vector>

#include "causalperf/graph.hpp"

namespace causalperf {

enum class VarType : uint8_t { Discrete, Continuous };

struct VariableMeta {
    std::string name;
    NodeRole role = NodeRole::None;  // option or performance
    VarType dtype = VarType::Continuous;
    std::vector<std::string> levels;  // discrete only; nonempty, distinct
    std::string units;
};

/// Complete rectangular table of measured configurations. Discrete columns
/// hold level indices, continuous columns hold doubles. No missing values.
class Dataset {
public:
    Dataset() = default;

    int add_variable(const VariableMeta& meta);

    int variable_count() const { return static_cast<int>(vars_.size()); }
    long row_count() const { return rows_; }
    const VariableMeta& variable(int i) const { return vars_.at(i); }
    const std::vector<VariableMeta>& variables() const { return vars_; }
    int index_of(const std::string& name) const;

    /// Appends one row; `values` holds a level index (discrete) or double
    /// (continuous) per variable, in variable order.
    void add_row(const std::vector<double>& values);

    double value(long row, int var) const { return columns_.at(var).at(row); }
    /// Level index for a discrete variable.
    int level(long row, int var) const;
    const std::vector<double>& column(int var) const { return columns_.at(var); }

    /// Validates invariants: N >= 1, discrete values within declared levels,
    /// no constant columns. Throws DegenerateError / InputError.
    void validate() const;

    int level_count(int var) const;

private:
    std::vector<VariableMeta> vars_;
    std::vector<std::vector<double>> columns_;
    std::map<std::string, int> index_;
    long rows_ = 0;
};

/// CSV + sidecar metadata ingestion. The metadata file declares one line per
/// column: `var: <name> role=option|performance dtype=discrete|continuous
/// [levels=a,b,c] [units=...]`.
Dataset load_dataset(const std::string& csv_path, const std::string& meta_path);
void save_dataset(const Dataset& d, const std::string& csv_path, const std::string& meta_path);

std::vector<VariableMeta> load_metadata(const std::string& meta_path);

}  // namespace causalperf
