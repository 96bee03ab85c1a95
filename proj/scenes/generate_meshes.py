"""Writes the small meshes used by the bundled scenes into scenes/meshes/."""
import math
import os

HERE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "meshes")


def write_obj(name, verts, tris):
    with open(os.path.join(HERE, name), "w") as f:
        for v in verts:
            f.write("v %.17g %.17g %.17g\n" % tuple(v))
        for t in tris:
            f.write("f %d %d %d\n" % (t[0] + 1, t[1] + 1, t[2] + 1))


def write_tetgen(name, verts, tets):
    with open(os.path.join(HERE, name + ".node"), "w") as f:
        f.write("%d 3 0 0\n" % len(verts))
        for i, v in enumerate(verts):
            f.write("%d %.17g %.17g %.17g\n" % ((i,) + tuple(v)))
    with open(os.path.join(HERE, name + ".ele"), "w") as f:
        f.write("%d 4 0\n" % len(tets))
        for i, t in enumerate(tets):
            f.write("%d %d %d %d %d\n" % ((i,) + tuple(t)))


def icosphere():
    t = (1 + 5 ** 0.5) / 2
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0), (0, -1, t), (0, 1, t),
             (0, -1, -t), (0, 1, -t), (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    verts = [tuple(c / math.sqrt(sum(x * x for x in v)) for c in v) for v in verts]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
             (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
             (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    cache = {}

    def mid(a, b):
        key = (min(a, b), max(a, b))
        if key not in cache:
            m = [(verts[a][k] + verts[b][k]) / 2 for k in range(3)]
            n = math.sqrt(sum(x * x for x in m))
            verts.append(tuple(x / n for x in m))
            cache[key] = len(verts) - 1
        return cache[key]

    out = []
    for a, b, c in faces:
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        out += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
    return verts, out


def cube_tets(n):
    """n^3 sub-cubes of the unit cube, 5 tets each, alternating parity so faces conform."""
    idx = lambda i, j, k: i + (n + 1) * (j + (n + 1) * k)
    verts = [(i / n, j / n, k / n) for k in range(n + 1) for j in range(n + 1) for i in range(n + 1)]
    tets = []
    for k in range(n):
        for j in range(n):
            for i in range(n):
                c = [idx(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1)) for b in range(8)]
                if (i + j + k) % 2 == 0:
                    local = [(0, 1, 2, 4), (1, 3, 2, 7), (1, 4, 5, 7), (2, 4, 7, 6), (1, 2, 4, 7)]
                else:
                    local = [(1, 0, 3, 5), (0, 2, 3, 6), (0, 5, 4, 6), (3, 5, 6, 7), (0, 3, 5, 6)]
                tets += [tuple(c[a] for a in t) for t in local]
    return verts, tets


def funnel(segments=12, r_top=1.0, r_bottom=0.35, height=1.0):
    verts, tris = [], []
    for ring, (r, y) in enumerate([(r_bottom, 0.0), (r_top, height)]):
        for s in range(segments):
            a = 2 * math.pi * s / segments
            verts.append((r * math.cos(a), y, r * math.sin(a)))
    for s in range(segments):
        a, b = s, (s + 1) % segments
        tris += [(a, segments + a, b), (b, segments + a, segments + b)]
    return verts, tris


if __name__ == "__main__":
    os.makedirs(HERE, exist_ok=True)
    v, f = icosphere()
    write_obj("icosphere.obj", v, f)
    # Solid ball: icosphere surface plus a center vertex.
    write_tetgen("ball", v + [(0.0, 0.0, 0.0)], [(len(v), a, b, c) for a, b, c in f])
    s = 1 / math.sqrt(2)
    write_tetgen("tet", [(1, 0, -s), (-1, 0, -s), (0, 1, s), (0, -1, s)], [(0, 1, 2, 3)])
    write_tetgen("cube", *cube_tets(1))
    write_tetgen("cube2", *cube_tets(2))
    write_obj("ground.obj", [(-1, 0, -1), (1, 0, -1), (1, 0, 1), (-1, 0, 1)], [(0, 2, 1), (0, 3, 2)])
    write_obj("funnel.obj", *funnel())
    # Regular tet with a face on y = 0 and the apex up.
    h = math.sqrt(2)
    write_tetgen("tet_flat", [(1, 0, 0), (-0.5, 0, math.sqrt(3) / 2), (-0.5, 0, -math.sqrt(3) / 2), (0, h, 0)],
                 [(0, 1, 2, 3)])
    # Roof with its ridge along z at y = 0.
    write_obj("ridge.obj", [(-1, -0.5, -1), (-1, -0.5, 1), (0, 0, -1), (0, 0, 1), (1, -0.5, -1), (1, -0.5, 1)],
              [(0, 1, 3), (0, 3, 2), (2, 3, 5), (2, 5, 4)])
    # Pyramid with its apex at the origin.
    write_obj("peak.obj", [(0, 0, 0), (-1, -0.5, -1), (1, -0.5, -1), (1, -0.5, 1), (-1, -0.5, 1)],
              [(0, 4, 3), (0, 3, 2), (0, 2, 1), (0, 1, 4)])
