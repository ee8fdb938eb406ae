// Regenerates the two demo configs under configs/ from the recorded seeds in
// rcd::demo, so the committed files can always be reproduced.

#include <fstream>
#include <iostream>
#include <string>

#include "json.hpp"
#include "rcd/demo.hpp"

namespace {

void write_config(const rcd::ConfigDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  out << rcd::config_to_json(doc).dump(2) << '\n';
  std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "configs";
  write_config(rcd::demo::regime_a_document(), dir + "/regime_a.json");
  write_config(rcd::demo::regime_b_document(), dir + "/regime_b.json");
  return 0;
}
