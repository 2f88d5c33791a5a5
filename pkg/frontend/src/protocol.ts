// Wire messages exchanged with the control service. One JSON object per
// text frame; the server sends a state snapshot and then the pad layout to
// every new client, and a fresh state broadcast after each change batch.

export interface StateMessage {
  type: "state";
  levels: number[];
  rgb: [number, number, number];
}

export interface LayoutMessage {
  type: "layout";
  slider_count: number;
  band_width: number;
  gap_width: number;
  x_max: number;
  y_max: number;
  level_count: number;
  y_inverted: boolean;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = StateMessage | LayoutMessage | ErrorMessage;

function isInt(v: unknown): v is number {
  return typeof v === "number" && Number.isInteger(v);
}

function isIntArray(v: unknown, length?: number): v is number[] {
  return Array.isArray(v) && (length === undefined || v.length === length) && v.every(isInt);
}

/** Parse and validate one server message; throws on anything malformed. */
export function parseServerMessage(raw: string): ServerMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    throw new Error(`not JSON: ${raw.slice(0, 80)}`);
  }
  if (typeof obj !== "object" || obj === null) {
    throw new Error("message is not an object");
  }
  const msg = obj as Record<string, unknown>;
  switch (msg.type) {
    case "state": {
      if (!isIntArray(msg.levels) || !isIntArray(msg.rgb, 3)) {
        throw new Error("bad state message");
      }
      return { type: "state", levels: msg.levels, rgb: msg.rgb as [number, number, number] };
    }
    case "layout": {
      const ints = ["slider_count", "band_width", "gap_width", "x_max", "y_max", "level_count"];
      if (!ints.every((k) => isInt(msg[k])) || typeof msg.y_inverted !== "boolean") {
        throw new Error("bad layout message");
      }
      return {
        type: "layout",
        slider_count: msg.slider_count as number,
        band_width: msg.band_width as number,
        gap_width: msg.gap_width as number,
        x_max: msg.x_max as number,
        y_max: msg.y_max as number,
        level_count: msg.level_count as number,
        y_inverted: msg.y_inverted,
      };
    }
    case "error": {
      if (typeof msg.message !== "string") {
        throw new Error("bad error message");
      }
      return { type: "error", message: msg.message };
    }
    default:
      throw new Error(`unknown message type: ${String(msg.type)}`);
  }
}

/** Serialize one touch event for the server. */
export function touchMessage(x: number, y: number, z: number, finger: boolean): string {
  return JSON.stringify({ type: "touch", x, y, z, finger });
}
