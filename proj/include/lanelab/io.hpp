#ifndef LANELAB_IO_HPP
#define LANELAB_IO_HPP

#include <map>
#include <string>
#include <vector>

namespace lanelab {
namespace io {

// CSV with a header row; numbers printed with %.12g so repeated runs are
// byte-identical.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  void write(const std::string& path) const;
};

std::string format_g(double v);

// Run manifest (inputs, tolerances, version) written next to each output.
struct Manifest {
  std::string command;
  std::map<std::string, std::string> params;
  bool deterministic = false;
  void write(const std::string& path) const;
};

// key = value config files ("--config file"); '#' comments allowed.
std::map<std::string, std::string> read_config(const std::string& path);

extern const char* kVersion;

}  // namespace io
}  // namespace lanelab

#endif
