// What-if session service. Listens on HOPLITE_PORT (default 8080).

#include <cstdlib>
#include <iostream>
#include <string>

#include "hoplite/http_service.hpp"

int main() {
  int port = 8080;
  if (const char* env = std::getenv("HOPLITE_PORT")) {
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "HOPLITE_PORT must be a port number\n";
      return 64;
    }
  }
  hoplite::SessionStore store;
  httplib::Server server;
  hoplite::mountRoutes(server, store);
  std::cout << "listening on port " << port << std::endl;
  if (!server.listen("0.0.0.0", port)) {
    std::cerr << "cannot listen on port " << port << "\n";
    return 1;
  }
  return 0;
}
