#pragma once

#include <map>
#include <string>
#include <vector>

#include "specbsa/datasets.hpp"

namespace specbsa {

// The fixed node ordering of ingested networks (regions[i] is node i) plus
// the country-to-region assignment used to place airports.
struct RegionMapping {
    std::vector<std::string> regions;
    std::map<std::string, std::string> country_to_region;
};

// Checks that the mapping names exactly six regions and that every mapped
// country points at one of them. Throws SchemaError.
void check_region_mapping(const RegionMapping& mapping);

// Per-airline ingestion tallies; mapped + unmapped + unknown_airport equals
// total, and only mapped routes contribute weight.
struct IngestStats {
    std::string airline;
    long total_routes = 0;
    long mapped_routes = 0;            // both endpoints in mapped regions
    long unmapped_routes = 0;          // an endpoint country outside the mapping
    long unknown_airport_routes = 0;   // an endpoint absent from the airports file
};

// Builds one region-level network per requested airline code from
// OpenFlights-style CSV files. Edge {r1,r2} weighs the proportion of the
// airline's worldwide routes flown between those regions (either direction);
// routes inside a single region weigh the diagonal. Routes whose endpoints
// cannot be placed count toward the denominator only and are reported in
// `warnings`. Airlines matching no route rows are skipped with a warning;
// if no requested airline yields a network, throws EmptySelection.
//
// Routes rows: airline code, airline id, source airport, source airport id,
// destination airport, destination airport id, codeshare, stops, equipment.
// Airports rows: airport id, name, city, country, IATA code, ICAO code, ...
// `\N` denotes a null field.
Dataset ingest_openflights(const std::string& routes_path, const std::string& airports_path,
                           const RegionMapping& mapping,
                           const std::vector<std::string>& airlines,
                           std::vector<std::string>* warnings = nullptr,
                           std::vector<IngestStats>* stats = nullptr);

} // namespace specbsa
