#ifndef TEAMFORM_CSV_HPP
#define TEAMFORM_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace teamform {

// Comma-separated table with a header row; '#' lines are comments and are
// collected separately.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable parse_csv(std::istream& in);
CsvTable parse_csv_text(const std::string& text);
CsvTable load_csv(const std::string& path);

}  // namespace teamform

#endif
