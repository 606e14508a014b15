"""High-precision WGS84 reference values for the geodesy unit tests.

Uses mpmath at 50 significant digits and the closed-form forward transform
only, so it shares no code path with the C++ implementation. Run it to
regenerate the constants frozen in tests/unit/test_geodesy.cpp.
"""
import mpmath as mp

mp.mp.dps = 50
A = mp.mpf(6378137)
F = 1 / mp.mpf("298.257223563")
E2 = F * (2 - F)


def to_ecef(lat_deg, lon_deg, h):
    lat = mp.radians(mp.mpf(lat_deg))
    lon = mp.radians(mp.mpf(lon_deg))
    h = mp.mpf(h)
    n = A / mp.sqrt(1 - E2 * mp.sin(lat) ** 2)
    return ((n + h) * mp.cos(lat) * mp.cos(lon),
            (n + h) * mp.cos(lat) * mp.sin(lon),
            (n * (1 - E2) + h) * mp.sin(lat))


def to_enu(p, origin):
    lat = mp.radians(mp.mpf(origin[0]))
    lon = mp.radians(mp.mpf(origin[1]))
    a = to_ecef(*p)
    o = to_ecef(*origin)
    d = [a[i] - o[i] for i in range(3)]
    e = -mp.sin(lon) * d[0] + mp.cos(lon) * d[1]
    n = (-mp.sin(lat) * mp.cos(lon) * d[0] - mp.sin(lat) * mp.sin(lon) * d[1]
         + mp.cos(lat) * d[2])
    u = (mp.cos(lat) * mp.cos(lon) * d[0] + mp.cos(lat) * mp.sin(lon) * d[1]
         + mp.sin(lat) * d[2])
    return e, n, u


def meridian_radius(lat_deg):
    lat = mp.radians(mp.mpf(lat_deg))
    return A * (1 - E2) / (1 - E2 * mp.sin(lat) ** 2) ** mp.mpf(1.5)


if __name__ == "__main__":
    x, y, z = to_ecef("51.03", "13.73", 300)
    print("dresden ecef", mp.nstr(x, 20), mp.nstr(y, 20), mp.nstr(z, 20))
    print("polar b", mp.nstr(A * (1 - F), 20))
    # 100 m of meridian arc north of (0, 0): for this short arc the local
    # meridian radius is constant to well below a micrometre.
    dlat = mp.degrees(100 / meridian_radius(0))
    print("dlat_deg", mp.nstr(dlat, 25))
    e, n, u = to_enu((dlat, 0, 0), (0, 0, 0))
    print("north100 enu", mp.nstr(e, 20), mp.nstr(n, 20), mp.nstr(u, 20))
    e, n, u = to_enu(("51.0312", "13.7401", "250.5"), ("51.03", "13.73", "220"))
    print("dresden enu", mp.nstr(e, 20), mp.nstr(n, 20), mp.nstr(u, 20))
