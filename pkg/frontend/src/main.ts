import { touchMessage } from "./protocol.js";
import { LightSocket } from "./ws.js";
import { PadView } from "./padView.js";
import { ClusterView } from "./clusterView.js";

const url = new URLSearchParams(location.search).get("ws") ?? "ws://127.0.0.1:8765";

const canvas = document.getElementById("pad") as HTMLCanvasElement;
const clusterRoot = document.getElementById("cluster")!;
const status = document.getElementById("status")!;

const cluster = new ClusterView(clusterRoot);
const pad = new PadView(canvas, (x, y, z, finger) => {
  socket.send(touchMessage(x, y, z, finger));
});

const socket = new LightSocket(url, {
  onMessage: (msg) => {
    switch (msg.type) {
      case "state":
        cluster.update(msg);
        break;
      case "layout":
        pad.setLayout(msg);
        cluster.setLevelCount(msg.level_count);
        break;
      case "error":
        console.warn("server rejected a message:", msg.message);
        break;
    }
  },
  onStatus: (up) => {
    status.textContent = up ? `connected to ${url}` : "reconnecting…";
    status.className = up ? "ok" : "down";
  },
});

socket.connect();
