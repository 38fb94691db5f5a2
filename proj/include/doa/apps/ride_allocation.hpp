#pragma once

#include <vector>

#include "doa/apps/app.hpp"

namespace doa::apps::ride {

struct Driver {
  Int driver_id = 0;
  double x = 0.0;
  double y = 0.0;
  bool available = true;
};

struct Request {
  Int ride_id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct Allocation {
  Int ride_id = 0;
  /// -1 when no driver was available.
  Int driver_id = -1;
  double distance = 0.0;
  Int available_drivers = 0;

  bool matched() const { return driver_id >= 0; }
};

double distance(double ax, double ay, double bx, double by);

/// Nearest available driver, lowest id on ties. Order of `drivers` is irrelevant.
Allocation allocate(const Request& request, const std::vector<Driver>& drivers);

/// Dataset feature names, in model column order.
inline const std::vector<std::string> kWaitFeatures = {
    "assignments.distance", "ride_requests.hour", "assignments.available_drivers"};

std::vector<double> wait_features(double distance, Int hour, Int available_drivers);

CollectionSpec collection_spec();

FbpApp build_fbp(Stage stage, const BuildOptions& options);
SoaApp build_soa(Stage stage, const BuildOptions& options);

}  // namespace doa::apps::ride
