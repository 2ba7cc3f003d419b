/** Display-space <-> native-image-space coordinate mapping.
 *
 * The image is rendered at some display scale; mouse events arrive in
 * integer display pixels and the server validates regions against the
 * native image size, so everything funnels through these functions.
 */

export interface Point {
  x: number;
  y: number;
}

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface ImageSize {
  width: number;
  height: number;
}

export function displayToNative(value: number, scale: number): number {
  return Math.round(value / scale);
}

export function nativeToDisplay(value: number, scale: number): number {
  return Math.round(value * scale);
}

/** Axis-aligned rectangle from two drag endpoints, any drag direction. */
export function rectFromPoints(a: Point, b: Point): Rect {
  const x = Math.min(a.x, b.x);
  const y = Math.min(a.y, b.y);
  return { x, y, w: Math.abs(a.x - b.x), h: Math.abs(a.y - b.y) };
}

export function rectToNative(rect: Rect, scale: number): Rect {
  return {
    x: displayToNative(rect.x, scale),
    y: displayToNative(rect.y, scale),
    w: displayToNative(rect.w, scale),
    h: displayToNative(rect.h, scale),
  };
}

export function rectToDisplay(rect: Rect, scale: number): Rect {
  return {
    x: nativeToDisplay(rect.x, scale),
    y: nativeToDisplay(rect.y, scale),
    w: nativeToDisplay(rect.w, scale),
    h: nativeToDisplay(rect.h, scale),
  };
}

/** Clamp a native-space rectangle into the image so the server's bounds
 * check (x + w <= width, y + h <= height, both sides positive) accepts
 * it. The result is the intersection with the image; a rectangle that
 * misses the image entirely (or degenerates) comes back as null. */
export function clampRect(rect: Rect, image: ImageSize): Rect | null {
  const x0 = Math.max(rect.x, 0);
  const y0 = Math.max(rect.y, 0);
  const x1 = Math.min(rect.x + rect.w, image.width);
  const y1 = Math.min(rect.y + rect.h, image.height);
  if (x1 - x0 < 1 || y1 - y0 < 1) return null;
  return { x: x0, y: y0, w: x1 - x0, h: y1 - y0 };
}
