#!/usr/bin/env python3
"""Regenerates data/fixture: a synthetic metro area for the end-to-end tests.

Layout around a single center point:
  - 10 providers on a 0.4 mi circle,
  - 5 urban zones on a 1 mi circle (inside every catchment),
  - 40 suburban zones on 6.5 / 8.5 / 11.5 / 13.5 mi circles,
  - 5 rural zones on a 25 mi circle (outside every catchment).

The star road network connects every site to a hub node, so travel time
zone -> provider is the sum of the two spoke costs. Spoke costs keep every
zone group at least 2 minutes away from the 10/20/30 minute ring boundaries,
and the circle radii keep straight-line distances at least 0.3 mi away from
the 5/10/15 mile boundaries after rounding coordinates to 6 decimals.
"""

import json
import math
import os

EARTH_RADIUS_M = 6_371_000.0
METERS_PER_MILE = 1_609.344
CENTER_LON, CENTER_LAT = -86.70, 36.10

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "fixture")


def offset(miles, angle_deg):
    """Point `miles` from the center at bearing `angle_deg`, 6-decimal lon/lat."""
    meters = miles * METERS_PER_MILE
    lat_per_m = 180.0 / (math.pi * EARTH_RADIUS_M)
    lon_per_m = lat_per_m / math.cos(math.radians(CENTER_LAT))
    a = math.radians(angle_deg)
    lon = CENTER_LON + meters * math.sin(a) * lon_per_m
    lat = CENTER_LAT + meters * math.cos(a) * lat_per_m
    return round(lon, 6), round(lat, 6)


def haversine_miles(a, b):
    lon1, lat1 = map(math.radians, a)
    lon2, lat2 = map(math.radians, b)
    s = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(
        (lon2 - lon1) / 2
    ) ** 2
    return 2 * EARTH_RADIUS_M * math.atan2(math.sqrt(s), math.sqrt(1 - s)) / METERS_PER_MILE


def point_feature(zone_id, lonlat, props):
    return {
        "type": "Feature",
        "geometry": {"type": "Point", "coordinates": list(lonlat)},
        "properties": {"id": zone_id, **props},
    }


def main():
    providers = []  # (id, lonlat, capacity)
    capacities = [5, 3, 8, 2, 6, 4, 7, 3, 5, 2]
    for i in range(10):
        providers.append((f"p{i + 1:02d}", offset(0.4, 36.0 * i), capacities[i]))

    zones = []  # (id, lonlat, pop, group, spoke_cost_s)
    urban_pops = [1200, 1500, 900, 1100, 1300]
    for i in range(5):
        zones.append((f"z{i + 1:02d}", offset(1.0, 72.0 * i + 10), urban_pops[i], "urban", 120))

    # Radii and spoke costs keep each group in the same ring under the
    # 5/10/15 mile and the 10/20/30 minute schemes (groups 1-2 in ring 2,
    # groups 3-4 in ring 3), so both mobility modes score identically.
    suburb = [(6.5, 660), (8.5, 840), (11.5, 1260), (13.5, 1500)]
    k = 5
    for radius, spoke in suburb:
        for j in range(10):
            k += 1
            zones.append(
                (f"z{k:02d}", offset(radius, 36.0 * j + 7), 300 + 17 * k, "suburban", spoke)
            )

    rural_pops = [150, 80, 120, 60, 90]
    for i in range(5):
        k += 1
        zones.append((f"z{k:02d}", offset(25.0, 72.0 * i + 33), rural_pops[i], "rural", 7170))
    assert k == 50

    # Layout invariants the tests lean on.
    for zid, zpt, _, group, spoke in zones:
        total_min = (spoke + 60) / 60.0
        for pid, ppt, _ in providers:
            d = haversine_miles(zpt, ppt)
            if group == "urban":
                assert d < 4.7, (zid, pid, d)
                assert total_min < 8
            elif group == "suburban":
                assert 5.3 < d < 14.7, (zid, pid, d)
                for boundary in (5.0, 10.0, 15.0):
                    assert abs(d - boundary) > 0.3, (zid, pid, d)
                assert 12 <= total_min <= 28
                for boundary_min in (10, 20, 30):
                    assert abs(total_min - boundary_min) >= 2, (zid, total_min)
                mile_ring = 2 if d <= 10 else 3
                minute_ring = 2 if total_min <= 20 else 3
                assert mile_ring == minute_ring, (zid, pid, d, total_min)
            else:
                assert d > 15.5, (zid, pid, d)
                assert total_min > 60

    os.makedirs(OUT_DIR, exist_ok=True)

    with open(os.path.join(OUT_DIR, "providers.geojson"), "w") as f:
        doc = {
            "type": "FeatureCollection",
            "features": [
                point_feature(pid, pt, {"capacity": cap}) for pid, pt, cap in providers
            ],
        }
        json.dump(doc, f, indent=2)
        f.write("\n")

    with open(os.path.join(OUT_DIR, "zones.geojson"), "w") as f:
        doc = {
            "type": "FeatureCollection",
            "features": [
                point_feature(zid, pt, {"pop": pop, "group": group})
                for zid, pt, pop, group, _ in zones
            ],
        }
        json.dump(doc, f, indent=2)
        f.write("\n")

    def fmt(x):
        return repr(x)

    with open(os.path.join(OUT_DIR, "roads.csv"), "w") as f:
        f.write("from_id,to_id,from_x,from_y,to_x,to_y,cost_s\n")
        hub = f"{CENTER_LON},{CENTER_LAT}"
        for pid, (lon, lat), _ in providers:
            f.write(f"n_{pid},hub,{fmt(lon)},{fmt(lat)},{hub},60\n")
        for zid, (lon, lat), _, _, spoke in zones:
            f.write(f"n_{zid},hub,{fmt(lon)},{fmt(lat)},{hub},{spoke}\n")

    with open(os.path.join(OUT_DIR, "ages.csv"), "w") as f:
        f.write("id,lon,lat,p0,p1,p2,p3,p4\n")
        f.write("a1,-86.70,36.10,100,200,100,50,50\n")
        f.write("a2,-86.65,36.15,1000,0,0,0,0\n")

    print(f"wrote {len(providers)} providers, {len(zones)} zones")


if __name__ == "__main__":
    main()
