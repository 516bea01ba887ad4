#include "persistid/resolver.hpp"

#include <algorithm>
#include <csignal>
#include <cstdio>

#include <httplib.h>
#include <json.hpp>

#include "persistid/error.hpp"
#include "persistid/ndn_access.hpp"
#include "persistid/torrent.hpp"

namespace persistid {

namespace {

using nlohmann::ordered_json;

HttpReply json_reply(int status, const ordered_json& body) {
  return HttpReply{status, "application/json", body.dump(-1, ' ', false, ordered_json::error_handler_t::replace),
                   std::nullopt};
}

HttpReply error_reply(int status, std::string_view message) {
  ordered_json body;
  body["error"] = message;
  return json_reply(status, body);
}

int status_for(Errc code) {
  switch (code) {
    case Errc::NotFound:
    case Errc::NoTarget:
    case Errc::UnknownPrefix:
      return 404;
    case Errc::DuplicateHandle:
      return 409;
    case Errc::Io:
    case Errc::Journal:
      return 500;
    default:
      return 400;
  }
}

ordered_json record_json(const HandleRecord& record) {
  ordered_json j;
  j["pid"] = record.pid();
  j["values"] = ordered_json::array();
  for (const auto& v : record.values) {
    j["values"].push_back({{"index", v.index}, {"type", v.type}, {"data", v.data}, {"timestamp", v.timestamp}});
  }
  return j;
}

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::vector<HandleValue> values_from_body(std::string_view body) {
  const auto doc = ordered_json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("values") || !doc["values"].is_array()) {
    throw Error(Errc::InvalidValue, "expected {\"values\": [...]}");
  }
  std::vector<HandleValue> values;
  for (const auto& item : doc["values"]) {
    if (!item.is_object() || !item.contains("index") || !item["index"].is_number_unsigned() ||
        !item.contains("type") || !item["type"].is_string() || !item.contains("data") || !item["data"].is_string()) {
      throw Error(Errc::InvalidValue, "each value needs index (unsigned), type and data (strings)");
    }
    const auto index = item["index"].get<std::uint64_t>();
    if (index > 0xffffffffu) throw Error(Errc::InvalidValue, "index out of range");
    values.push_back(HandleValue{static_cast<std::uint32_t>(index), item["type"].get<std::string>(),
                                 item["data"].get<std::string>(), 0});
  }
  return values;
}

}  // namespace

void ServiceConfig::validate() const {
  if (prefixes.empty()) throw Error(Errc::InvalidArgument, "at least one prefix must be registered");
  for (const auto& p : prefixes) {
    if (!is_valid_prefix(p)) throw Error(Errc::InvalidArgument, "bad prefix: " + p);
  }
  if (token.empty()) throw Error(Errc::InvalidArgument, "a bearer token is required");
  if (port < 0 || port > 65535) throw Error(Errc::InvalidArgument, "bad port");
}

struct ResolverService::Server {
  httplib::Server http;
};

ResolverService::ResolverService(HandleStore& store, std::string token)
    : store_(store), token_(std::move(token)), server_(std::make_unique<Server>()) {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    if (reply.location) res.set_header("Location", *reply.location);
    res.set_content(reply.body, reply.content_type.empty() ? "text/plain" : reply.content_type);
  };

  auto& http = server_->http;
  http.set_keep_alive_max_count(1000);
  http.set_tcp_nodelay(true);
  http.Get(R"(/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    const auto type = req.get_param_value("type");
    const auto flag = req.get_param_value("noredirect");
    const bool noredirect = req.has_param("noredirect") && flag != "0" && flag != "false";
    send(res, resolve(std::string_view(req.path).substr(1),
                      req.has_param("type") ? std::optional<std::string_view>(type) : std::nullopt, noredirect));
  });
  http.Post(R"(/([^/]+)/from-torrent)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, mint_from_torrent(req.matches[1].str(), req.get_header_value("Authorization"), req.body));
  });
  http.Post(R"(/([^/]+)/from-ndn)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, mint_from_ndn(req.matches[1].str(), req.get_header_value("Authorization"), req.body));
  });
  http.Put(R"(/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, put_values(std::string_view(req.path).substr(1), req.get_header_value("Authorization"), req.body));
  });
  http.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send(res, error_reply(500, e.what()));
    }
  });
}

ResolverService::~ResolverService() { stop(); }

bool ResolverService::authorized(std::string_view authorization) const {
  constexpr std::string_view scheme = "Bearer ";
  if (token_.empty() || !authorization.starts_with(scheme)) return false;
  const auto presented = authorization.substr(scheme.size());
  if (presented.size() != token_.size()) return false;
  unsigned char diff = 0;
  for (std::size_t i = 0; i < presented.size(); ++i) diff |= static_cast<unsigned char>(presented[i] ^ token_[i]);
  return diff == 0;
}

HttpReply ResolverService::resolve(std::string_view pid, std::optional<std::string_view> type, bool noredirect) const {
  try {
    Pid::parse(pid);
  } catch (const Error& e) {
    return error_reply(400, e.what());
  }
  const auto record = store_.find_handle(pid);
  if (!record) return error_reply(404, "handle not found: " + std::string(pid));
  if (noredirect) return json_reply(200, record_json(*record));

  if (type) {
    const auto wanted = upper(*type);
    if (wanted != kTypeUrl && wanted != kTypeMagnet) return error_reply(400, "type must be URL or MAGNET");
    const auto* value = record->find_type(wanted);
    if (!value) return error_reply(404, std::string(pid) + " has no " + wanted + " value");
    return HttpReply{303, "text/plain", value->data + "\n", value->data};
  }
  try {
    const auto result = store_.resolve_default(pid);
    return HttpReply{303, "text/plain", result.target + "\n", result.target};
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }
}

HttpReply ResolverService::mint(std::string_view prefix, const std::string& magnet) {
  try {
    const auto record =
        store_.create_handle(std::string(prefix), std::nullopt, {HandleValue{1, std::string(kTypeMagnet), magnet, 0}});
    ordered_json body;
    body["pid"] = record.pid();
    body["magnet"] = magnet;
    return json_reply(201, body);
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }
}

HttpReply ResolverService::mint_from_torrent(std::string_view prefix, std::string_view authorization,
                                             std::string_view body) {
  if (!authorized(authorization)) return error_reply(401, "missing or invalid bearer token");
  if (!store_.has_prefix(prefix)) return error_reply(404, "unknown prefix: " + std::string(prefix));
  std::string magnet;
  try {
    const std::span octets(reinterpret_cast<const std::uint8_t*>(body.data()), body.size());
    magnet = serialize_magnet(torrent_to_magnet(octets, false));
  } catch (const Error& e) {
    return error_reply(400, std::string("invalid torrent: ") + e.what());
  }
  return mint(prefix, magnet);
}

HttpReply ResolverService::mint_from_ndn(std::string_view prefix, std::string_view authorization,
                                         std::string_view body) {
  if (!authorized(authorization)) return error_reply(401, "missing or invalid bearer token");
  if (!store_.has_prefix(prefix)) return error_reply(404, "unknown prefix: " + std::string(prefix));
  std::string magnet;
  try {
    magnet = serialize_magnet(ndn_to_magnet(parse_ndn_access(body)));
  } catch (const Error& e) {
    return error_reply(400, std::string("invalid NDN access container: ") + e.what());
  }
  return mint(prefix, magnet);
}

HttpReply ResolverService::put_values(std::string_view pid_text, std::string_view authorization,
                                      std::string_view body) {
  if (!authorized(authorization)) return error_reply(401, "missing or invalid bearer token");
  try {
    const auto pid = Pid::parse(pid_text);
    auto values = values_from_body(body);
    if (!store_.has_prefix(pid.prefix)) return error_reply(404, "unknown prefix: " + pid.prefix);
    if (!store_.find_handle(pid.str())) {
      try {
        return json_reply(201, record_json(store_.create_handle(pid.prefix, pid.suffix, values)));
      } catch (const Error& e) {
        if (e.code() != Errc::DuplicateHandle) throw;
        // Lost a create race; fall through to update.
      }
    }
    return json_reply(200, record_json(store_.update_handle(pid.str(), std::move(values))));
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }
}

int ResolverService::bind(const std::string& host, int port) {
  auto& http = server_->http;
  if (port == 0) {
    const int bound = http.bind_to_any_port(host);
    if (bound < 0) throw Error(Errc::Io, "cannot bind " + host);
    return bound;
  }
  if (!http.bind_to_port(host, port)) throw Error(Errc::Io, "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ResolverService::run() { server_->http.listen_after_bind(); }

void ResolverService::stop() {
  if (server_ && server_->http.is_running()) server_->http.stop();
}

void ResolverService::wait_until_ready() const { server_->http.wait_until_ready(); }

namespace {
ResolverService* g_running = nullptr;
extern "C" void on_signal(int) {
  if (g_running) g_running->stop();
}
}  // namespace

void run_service(const ServiceConfig& config) {
  config.validate();
  auto store = config.store_path.empty() ? std::make_unique<HandleStore>()
                                         : std::make_unique<HandleStore>(config.store_path);
  for (const auto& prefix : config.prefixes) store->ensure_prefix(prefix);

  ResolverService service(*store, config.token);
  const int port = service.bind(config.host, config.port);
  std::fprintf(stderr, "listening on %s:%d\n", config.host.c_str(), port);
  g_running = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  service.run();
  g_running = nullptr;
}

}  // namespace persistid
