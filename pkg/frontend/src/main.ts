// Browser entry point: wire the session, wizard and view together.

import { CalibrationWizard } from "./calibration.js";
import { ConsoleSession } from "./session.js";
import { mount } from "./view.js";

function start(): void {
  const root = document.getElementById("app");
  const urlInput = document.getElementById("server-url") as HTMLInputElement | null;
  if (!root) {
    return;
  }
  const url = urlInput?.value || "ws://127.0.0.1:8765";
  const session = new ConsoleSession(url, (u) => new WebSocket(u));
  const wizard = new CalibrationWizard(session, {
    viewport: { width: window.innerWidth, height: window.innerHeight },
  });

  const redraw = () => mount(root, session, wizard);
  session.onChange = redraw;

  root.addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    switch (target.id) {
      case "mark-start":
        session.annotate("distraction_start");
        break;
      case "mark-refocus":
        session.annotate("refocus");
        break;
      case "retry":
        session.connect();
        break;
      case "calibrate-start":
        wizard.start(performance.now());
        break;
      case "calibrate-abort":
        wizard.abort();
        break;
      case "export": {
        if (!session.exportReady()) {
          break;
        }
        const blob = new Blob([session.exportLog()], { type: "application/jsonl" });
        const link = document.createElement("a");
        link.href = URL.createObjectURL(blob);
        link.download = `session-${session.descriptor?.session_id ?? "export"}.events.jsonl`;
        link.click();
        URL.revokeObjectURL(link.href);
        break;
      }
    }
    redraw();
  });

  function frame(now: number): void {
    wizard.tick(now);
    redraw();
    requestAnimationFrame(frame);
  }
  session.connect();
  requestAnimationFrame(frame);
}

window.addEventListener("DOMContentLoaded", start);
