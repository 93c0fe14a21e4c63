#include "cli/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>
#include <unistd.h>

#include "curveprobe/errors.hpp"

namespace curveprobe::cli {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write output file: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ValidationError("failed writing output file: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read input file: " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

fs::path sibling(const fs::path& path, const std::string& extension) {
  fs::path p = path;
  p.replace_extension(extension);
  return p;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<nlohmann::ordered_json>& cells) {
  if (cells.size() != width_) throw std::logic_error("CsvTable: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    const auto& c = cells[i];
    if (c.is_null()) continue;
    if (c.is_string()) {
      const auto s = c.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) {
        text_ += s;
      } else {
        text_ += '"';
        for (char ch : s) {
          if (ch == '"') text_ += '"';
          text_ += ch;
        }
        text_ += '"';
      }
    } else {
      text_ += c.dump();
    }
  }
  text_ += '\n';
}

std::string CsvTable::str() const { return text_; }

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json inputs_json = nlohmann::ordered_json::array();
  for (const auto& p : inputs) {
    inputs_json.push_back(nlohmann::ordered_json{{"path", p.string()}, {"sha256", sha256_file(p)}});
  }
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream ts;
  ts << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return nlohmann::ordered_json{{"tool", "curveprobe"},
                                {"tool_version", tool_version},
                                {"command_line", command_line},
                                {"config", config},
                                {"inputs", std::move(inputs_json)},
                                {"timestamp", ts.str()}};
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
  write_atomic(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
}

}  // namespace curveprobe::cli
