// Minimal 3-vector and quaternion helpers; quaternions are [x, y, z, w].

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number];

export const add = (a: Vec3, b: Vec3): Vec3 => [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
export const sub = (a: Vec3, b: Vec3): Vec3 => [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
export const scale = (a: Vec3, s: number): Vec3 => [a[0] * s, a[1] * s, a[2] * s];
export const dot = (a: Vec3, b: Vec3): number => a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
export const cross = (a: Vec3, b: Vec3): Vec3 => [
  a[1] * b[2] - a[2] * b[1],
  a[2] * b[0] - a[0] * b[2],
  a[0] * b[1] - a[1] * b[0],
];
export const norm = (a: Vec3): number => Math.sqrt(dot(a, a));
export const normalize = (a: Vec3): Vec3 => {
  const n = norm(a);
  return n > 1e-12 ? scale(a, 1 / n) : [0, 0, 0];
};

// column-major-free: returns the three world axes of the rotation
export function quatAxes(q: Quat): [Vec3, Vec3, Vec3] {
  const [x, y, z, w] = q;
  const xx = x * x, yy = y * y, zz = z * z;
  const xy = x * y, xz = x * z, yz = y * z;
  const wx = w * x, wy = w * y, wz = w * z;
  return [
    [1 - 2 * (yy + zz), 2 * (xy + wz), 2 * (xz - wy)],
    [2 * (xy - wz), 1 - 2 * (xx + zz), 2 * (yz + wx)],
    [2 * (xz + wy), 2 * (yz - wx), 1 - 2 * (xx + yy)],
  ];
}

export interface PoseJson {
  pos: number[];
  rot: number[];
  scale: number;
}

/** Map a view-local point through a pose (scale, rotate, translate). */
export function applyPose(pose: PoseJson, local: Vec3): Vec3 {
  const [ax, ay, az] = quatAxes(pose.rot as Quat);
  const s = pose.scale;
  const p = add(
    add(scale(ax, local[0] * s), scale(ay, local[1] * s)),
    scale(az, local[2] * s),
  );
  return add(p, pose.pos as Vec3);
}

export function poseNormal(pose: PoseJson): Vec3 {
  return quatAxes(pose.rot as Quat)[2];
}
