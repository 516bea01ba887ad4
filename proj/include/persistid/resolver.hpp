#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "persistid/handle_store.hpp"

namespace persistid {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::vector<std::string> prefixes;
  std::string token;  // bearer token guarding every mutating endpoint
  std::filesystem::path store_path;  // empty keeps the store in memory

  /// Throws Errc::InvalidArgument unless at least one valid prefix and a
  /// non-empty token are configured.
  void validate() const;
};

/// Transport-independent response.
struct HttpReply {
  int status = 200;
  std::string content_type;
  std::string body;
  std::optional<std::string> location;
};

/// HTTP front-end of a HandleStore.
///
///   GET  /{prefix}/{suffix}[?type=URL|MAGNET][&noredirect=1]
///   PUT  /{prefix}/{suffix}          {"values":[{"index":1,"type":"URL","data":"..."}]}
///   POST /{prefix}/from-torrent      raw torrent octets
///   POST /{prefix}/from-ndn          NDN access JSON
///
/// Resolution answers 303 See Other with the target in Location (MAGNET
/// preferred, URL otherwise). Mutations need `Authorization: Bearer <token>`.
class ResolverService {
 public:
  ResolverService(HandleStore& store, std::string token);
  ~ResolverService();

  ResolverService(const ResolverService&) = delete;
  ResolverService& operator=(const ResolverService&) = delete;

  HttpReply resolve(std::string_view pid, std::optional<std::string_view> type, bool noredirect) const;
  HttpReply mint_from_torrent(std::string_view prefix, std::string_view authorization, std::string_view body);
  HttpReply mint_from_ndn(std::string_view prefix, std::string_view authorization, std::string_view body);
  HttpReply put_values(std::string_view pid, std::string_view authorization, std::string_view body);

  /// Binds the listening socket; returns the bound port. Throws Errc::Io.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  bool authorized(std::string_view authorization) const;
  HttpReply mint(std::string_view prefix, const std::string& magnet);

  HandleStore& store_;
  std::string token_;
  struct Server;
  std::unique_ptr<Server> server_;
};

/// Content type of the `?noredirect=1` listing.
inline constexpr std::string_view kListingContentType = "application/json";

/// Opens the store, registers the configured prefixes and serves until the
/// process is stopped.
void run_service(const ServiceConfig& config);

}  // namespace persistid
