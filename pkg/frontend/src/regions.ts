/** Click-drag rectangle tool over a scaled image. Tracks the draft in
 * display space; only finish() converts to clamped native pixels. */

import { clampRect, ImageSize, Point, Rect, rectFromPoints, rectToNative } from "./coords.js";

export class RegionDraft {
  private start: Point | null = null;
  private current: Point | null = null;

  begin(p: Point): void {
    this.start = p;
    this.current = p;
  }

  drag(p: Point): void {
    if (this.start !== null) this.current = p;
  }

  cancel(): void {
    this.start = null;
    this.current = null;
  }

  get active(): boolean {
    return this.start !== null;
  }

  /** Current rectangle in display pixels, for drawing the overlay. */
  displayRect(): Rect | null {
    if (this.start === null || this.current === null) return null;
    return rectFromPoints(this.start, this.current);
  }

  /** End the drag: the drawn box mapped to native pixels and clamped to
   * the image, or null when nothing usable was drawn. */
  finish(scale: number, image: ImageSize): Rect | null {
    const shown = this.displayRect();
    this.cancel();
    if (shown === null || shown.w === 0 || shown.h === 0) return null;
    return clampRect(rectToNative(shown, scale), image);
  }
}
