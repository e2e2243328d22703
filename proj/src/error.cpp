#include "bikecast/error.hpp"

namespace bikecast {

const char* errc_name(errc code) {
  switch (code) {
    case errc::malformed_row: return "MalformedRow";
    case errc::missing_column: return "MissingColumn";
    case errc::duplicate_station: return "DuplicateStation";
    case errc::empty_input: return "EmptyInput";
    case errc::all_stations_dropped: return "AllStationsDropped";
    case errc::empty_station_list: return "EmptyStationList";
    case errc::unknown_station: return "UnknownStation";
    case errc::no_weather_history: return "NoWeatherHistory";
    case errc::horizon_not_multiple: return "HorizonNotMultiple";
    case errc::insufficient_data: return "InsufficientData";
    case errc::empty_region: return "EmptyRegion";
    case errc::empty_dataset: return "EmptyDataset";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::convergence_failure: return "ConvergenceFailure";
    case errc::too_few_rows: return "TooFewRows";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::unfitted_model: return "UnfittedModel";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::missing_upstream_artifact: return "MissingUpstreamArtifact";
    case errc::no_results: return "NoResults";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

} // namespace bikecast
