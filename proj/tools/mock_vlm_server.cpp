// Stand-in planner service for exercising the remote backend without a real
// model. Serves POST /plan with configurable behaviors.
#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Mock planner service"};
  int port = 8400;
  std::string mode = "zeros";  // zeros | shift | short | garbage
  int delay_ms = 0;
  double shift_y = 1.0;
  app.add_option("--port", port, "Listen port");
  app.add_option("--mode", mode, "zeros|shift|short|garbage");
  app.add_option("--delay-ms", delay_ms, "Artificial response delay");
  app.add_option("--shift-y", shift_y, "Lateral shift for --mode shift");
  CLI11_PARSE(app, argc, argv);

  httplib::Server server;
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
  server.Post("/plan", [&](const httplib::Request& req, httplib::Response& res) {
    if (delay_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    }
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("num_waypoints")) {
      res.status = 400;
      res.set_content("{\"error\":\"bad request\"}", "application/json");
      return;
    }
    const std::size_t m = body["num_waypoints"].get<std::size_t>();
    if (mode == "garbage") {
      res.set_content("the model declines to answer", "text/plain");
      return;
    }
    const std::size_t n = mode == "short" && m > 0 ? m - 1 : m;
    nlohmann::json residuals = nlohmann::json::array();
    for (std::size_t j = 0; j < n; ++j) {
      if (mode == "shift" && j > 0) {
        residuals.push_back({0.0, shift_y});
      } else {
        residuals.push_back({0.0, 0.0});
      }
    }
    nlohmann::json out;
    out["residuals"] = residuals;
    out["reasoning"] = mode == "shift" ? "shift remaining waypoints laterally" : "keep nominal";
    res.set_content(out.dump(), "application/json");
  });

  std::cout << "mock planner listening on 127.0.0.1:" << port << " mode=" << mode << "\n";
  if (!server.listen("127.0.0.1", port)) {
    std::cerr << "failed to bind port " << port << "\n";
    return 1;
  }
  return 0;
}
