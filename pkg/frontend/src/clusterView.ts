// The cluster panel: a blended-color swatch plus one level bar per channel,
// updated from state broadcasts in arrival order. No lighting math happens
// here — the server already blends; this only displays what it sends.

import type { StateMessage } from "./protocol.js";

const CHANNELS = [
  { name: "red", color: "#e5484d" },
  { name: "green", color: "#46a758" },
  { name: "blue", color: "#3e63dd" },
  { name: "yellow", color: "#ffe629" },
  { name: "white", color: "#f0f0f0" },
];

export class ClusterView {
  private swatch: HTMLElement;
  private bars: { fill: HTMLElement; readout: HTMLElement }[] = [];
  private levelMax = 22;

  constructor(root: HTMLElement) {
    this.swatch = document.createElement("div");
    this.swatch.className = "swatch";
    root.appendChild(this.swatch);

    const row = document.createElement("div");
    row.className = "bars";
    for (const channel of CHANNELS) {
      const bar = document.createElement("div");
      bar.className = "bar";
      const track = document.createElement("div");
      track.className = "track";
      const fill = document.createElement("div");
      fill.className = "fill";
      fill.style.background = channel.color;
      track.appendChild(fill);
      const readout = document.createElement("div");
      readout.className = "readout";
      readout.textContent = "0";
      const label = document.createElement("div");
      label.className = "label";
      label.textContent = channel.name;
      bar.append(track, readout, label);
      row.appendChild(bar);
      this.bars.push({ fill, readout });
    }
    root.appendChild(row);
  }

  setLevelCount(count: number): void {
    this.levelMax = Math.max(1, count - 1);
  }

  update(state: StateMessage): void {
    const [r, g, b] = state.rgb;
    this.swatch.style.background = `rgb(${r}, ${g}, ${b})`;
    state.levels.forEach((level, i) => {
      const bar = this.bars[i];
      if (bar === undefined) return;
      bar.fill.style.height = `${(100 * level) / this.levelMax}%`;
      bar.readout.textContent = String(level);
    });
  }
}
