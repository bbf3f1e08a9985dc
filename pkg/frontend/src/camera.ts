// Orbit camera with perspective projection and ray/plane helpers. The
// drag controller maps pointer motion onto a camera-parallel plane
// through the grab point, so dragging feels planar at any orbit angle.

import { add, cross, dot, normalize, scale, sub, type Vec3 } from "./vec.js";

export class OrbitCamera {
  target: Vec3 = [0.4, 0.5, 0];
  yaw = 0.0; // radians around world y
  pitch = 0.25;
  distance = 3.2;
  fov = Math.PI / 4;
  width = 800;
  height = 600;

  eye(): Vec3 {
    const cp = Math.cos(this.pitch), sp = Math.sin(this.pitch);
    const cy = Math.cos(this.yaw), sy = Math.sin(this.yaw);
    const dir: Vec3 = [cp * sy, sp, cp * cy];
    return add(this.target, scale(dir, this.distance));
  }

  basis(): { forward: Vec3; right: Vec3; up: Vec3 } {
    const forward = normalize(sub(this.target, this.eye()));
    const right = normalize(cross(forward, [0, 1, 0]));
    const up = cross(right, forward);
    return { forward, right, up };
  }

  private focal(): number {
    return this.height / 2 / Math.tan(this.fov / 2);
  }

  /** World point to [screenX, screenY, depth] or null behind the eye. */
  project(p: Vec3): [number, number, number] | null {
    const { forward, right, up } = this.basis();
    const v = sub(p, this.eye());
    const z = dot(v, forward);
    if (z < 0.05) return null;
    const f = this.focal();
    return [
      this.width / 2 + (f * dot(v, right)) / z,
      this.height / 2 - (f * dot(v, up)) / z,
      z,
    ];
  }

  ray(sx: number, sy: number): { origin: Vec3; dir: Vec3 } {
    const { forward, right, up } = this.basis();
    const f = this.focal();
    const dir = normalize(
      add(
        add(forward, scale(right, (sx - this.width / 2) / f)),
        scale(up, (this.height / 2 - sy) / f),
      ),
    );
    return { origin: this.eye(), dir };
  }

  /** Pointer ray intersected with the plane through `point` facing the camera. */
  planeHit(sx: number, sy: number, point: Vec3): Vec3 | null {
    const { forward } = this.basis();
    const { origin, dir } = this.ray(sx, sy);
    const denom = dot(dir, forward);
    if (Math.abs(denom) < 1e-9) return null;
    const t = dot(sub(point, origin), forward) / denom;
    if (t <= 0) return null;
    return add(origin, scale(dir, t));
  }

  depthShift(point: Vec3, pixels: number): Vec3 {
    const { forward } = this.basis();
    return add(point, scale(forward, -pixels * 0.004));
  }
}
