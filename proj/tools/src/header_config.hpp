#pragma once

#include <CLI11.hpp>

namespace lmpivot::cli {

// Reads plain key=value files and also the "# key=value" header block that every
// command writes, so an output file can be passed back through --config.
// Parsing stops at the first line that is neither a comment nor key=value.
class HeaderConfig : public CLI::ConfigBase {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace lmpivot::cli
