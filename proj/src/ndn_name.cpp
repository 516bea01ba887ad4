#include "persistid/ndn_name.hpp"

#include "persistid/encoding.hpp"
#include "persistid/error.hpp"

namespace persistid {

std::string escape_ndn_name(const NdnName& name) {
  if (name.components.empty()) throw Error(Errc::EmptyName, "NDN name has no components");
  std::string out;
  for (const auto& component : name.components) {
    out.push_back('/');
    for (char c : component) {
      if (is_unreserved(c) && c != '.') {
        out.push_back(c);
      } else {
        static constexpr char hex[] = "0123456789abcdef";
        const auto b = static_cast<unsigned char>(c);
        out += {'%', hex[b >> 4], hex[b & 15]};
      }
    }
  }
  return out;
}

NdnName unescape_ndn_name(std::string_view text) {
  if (text.empty() || text.front() != '/') {
    throw Error(Errc::NotRooted, "NDN name must start with '/': " + std::string(text));
  }
  NdnName name;
  std::size_t start = 1;
  while (true) {
    const std::size_t slash = text.find('/', start);
    const auto raw = text.substr(start, slash == std::string_view::npos ? text.npos : slash - start);
    auto decoded = percent_decode(raw);
    if (!decoded) throw Error(Errc::BadEscape, "bad percent escape in NDN component: " + std::string(raw));
    name.components.push_back(std::move(*decoded));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return name;
}

}  // namespace persistid
