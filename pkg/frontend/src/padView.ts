// The pad panel: draws the slider bands and gaps to scale from the layout
// the server reports, and turns pointer events into touch messages.

import type { LayoutMessage } from "./protocol.js";
import { PRESS_Z, pixelToPad } from "./mapping.js";

export interface BandRect {
  index: number;
  left: number;
  width: number;
}

/** Horizontal band extents in pixels for a panel of the given width. */
export function bandRects(layout: LayoutMessage, pixelWidth: number): BandRect[] {
  const scale = pixelWidth / (layout.x_max + 1);
  const pitch = layout.band_width + layout.gap_width;
  const rects: BandRect[] = [];
  for (let i = 0; i < layout.slider_count; i++) {
    rects.push({ index: i, left: i * pitch * scale, width: layout.band_width * scale });
  }
  return rects;
}

export type TouchSink = (x: number, y: number, z: number, finger: boolean) => void;

const BAND_TINTS = ["#e5484d", "#46a758", "#3e63dd", "#ffe629", "#f0f0f0"];
const BAND_LABELS = ["R", "G", "B", "Y", "W"];

export class PadView {
  private layout: LayoutMessage | null = null;
  private touch: { px: number; py: number } | null = null;

  constructor(private canvas: HTMLCanvasElement, private onTouch: TouchSink) {
    canvas.addEventListener("pointerdown", (e) => {
      canvas.setPointerCapture(e.pointerId);
      this.send(e, true);
    });
    canvas.addEventListener("pointermove", (e) => {
      if (this.touch !== null) this.send(e, true);
    });
    for (const done of ["pointerup", "pointercancel"] as const) {
      canvas.addEventListener(done, (e) => this.send(e, false));
    }
    this.draw();
  }

  setLayout(layout: LayoutMessage): void {
    this.layout = layout;
    this.draw();
  }

  private send(e: PointerEvent, finger: boolean): void {
    const rect = this.canvas.getBoundingClientRect();
    const px = ((e.clientX - rect.left) * this.canvas.width) / rect.width;
    const py = ((e.clientY - rect.top) * this.canvas.height) / rect.height;
    const l = this.layout;
    const point = pixelToPad(
      px,
      py,
      this.canvas.width,
      this.canvas.height,
      l?.x_max ?? 6143,
      l?.y_max ?? 6143,
      l?.y_inverted ?? false,
    );
    // fixed synthetic pressure; a pressure-reporting device could feed
    // e.pressure * 255 through here instead
    this.touch = finger ? { px, py } : null;
    this.onTouch(point.x, point.y, finger ? PRESS_Z : 0, finger);
    this.draw();
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (ctx === null) return;
    const { width, height } = this.canvas;
    ctx.fillStyle = "#131317";
    ctx.fillRect(0, 0, width, height);
    if (this.layout !== null) {
      ctx.font = "13px system-ui, sans-serif";
      ctx.textAlign = "center";
      for (const band of bandRects(this.layout, width)) {
        const tint = BAND_TINTS[band.index % BAND_TINTS.length] ?? "#888";
        ctx.fillStyle = tint + "22"; // translucent body
        ctx.fillRect(band.left, 0, band.width, height);
        ctx.strokeStyle = tint + "66";
        ctx.strokeRect(band.left + 0.5, 0.5, band.width - 1, height - 1);
        ctx.fillStyle = tint;
        const label =
          this.layout.slider_count === BAND_LABELS.length
            ? BAND_LABELS[band.index]!
            : String(band.index);
        ctx.fillText(label, band.left + band.width / 2, height - 8);
      }
    }
    if (this.touch !== null) {
      ctx.beginPath();
      ctx.arc(this.touch.px, this.touch.py, 9, 0, Math.PI * 2);
      ctx.fillStyle = "#ffffffcc";
      ctx.fill();
    }
  }
}
