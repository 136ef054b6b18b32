// DOM rendering. The pre-reveal view only ever prints whitelisted,
// condition-free facts (timestamps, counts, attention states); the part
// order appears exclusively in the reveal panel, which renders after
// the server's condition_reveal. Everything shown traces back to a
// received frame, so replaying the same frames renders the same view.

import { CalibrationWizard } from "./calibration.js";
import { ConsoleSession } from "./session.js";

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function formatSeconds(value: number): string {
  return value.toFixed(1) + "s";
}

function connectionBanner(session: ConsoleSession): string {
  switch (session.connection) {
    case "connected":
      return '<div class="status connected">connected</div>';
    case "reconnecting":
      return '<div class="status banner">connection lost, reconnecting...</div>';
    case "failed":
      return `<div class="status error">connection failed${
        session.lastError ? ": " + escapeHtml(session.lastError) : ""
      }<button id="retry">retry</button></div>`;
    case "connecting":
      return '<div class="status">connecting...</div>';
    default:
      return '<div class="status">not connected</div>';
  }
}

function timeline(session: ConsoleSession): string {
  const items: string[] = [];
  let openStart: number | null = null;
  for (const entry of session.annotations) {
    if (entry.mark === "distraction_start") {
      openStart = entry.t;
    } else if (entry.mark === "refocus" && openStart !== null) {
      const length = entry.t - openStart;
      items.push(
        `<li>${formatSeconds(openStart)} to ${formatSeconds(entry.t)} (${formatSeconds(length)})</li>`,
      );
      openStart = null;
    }
  }
  if (openStart !== null) {
    items.push(`<li>${formatSeconds(openStart)} to now</li>`);
  }
  return `<ul id="timeline">${items.join("")}</ul>`;
}

export function renderHtml(session: ConsoleSession, wizard: CalibrationWizard | null): string {
  const parts: string[] = [];
  parts.push(connectionBanner(session));

  const descriptor = session.descriptor;
  if (descriptor) {
    parts.push(
      `<div id="session-info">session ${escapeHtml(String(descriptor.session_id ?? "?"))}, ` +
        `${descriptor.parts ?? "?"} parts x ${descriptor.part_duration ?? "?"}s</div>`,
    );
  }

  if (session.currentPart !== null) {
    const elapsed = session.partElapsed();
    const total = session.partDuration;
    parts.push(
      `<div id="part-timer">part ${session.currentPart + 1}` +
        (descriptor?.parts ? ` of ${descriptor.parts}` : "") +
        (elapsed !== null && total ? `: ${formatSeconds(elapsed)} / ${formatSeconds(total)}` : "") +
        `</div>`,
    );
  }

  if (session.attentionState !== null) {
    parts.push(
      `<div id="attention" class="${session.attentionState}">participant: ${escapeHtml(
        session.attentionState,
      )}</div>`,
    );
  }

  // the intervention lamp exists only in unblinded sessions pre-reveal
  const blinded = session.descriptor?.blinded === true;
  if (!blinded || session.revealed) {
    parts.push(
      `<div id="intervention">intervention: ${session.interventionActive ? "on" : "off"}</div>`,
    );
  }

  parts.push(
    `<div id="annotate">` +
      `<button id="mark-start"${session.startEnabled() ? "" : " disabled"}>mark distraction</button>` +
      `<button id="mark-refocus"${session.refocusEnabled() ? "" : " disabled"}>mark refocus</button>` +
      `</div>`,
  );
  parts.push(timeline(session));

  if (wizard) {
    if (wizard.phase === "running") {
      const target = wizard.targetPosition();
      parts.push(
        `<div id="calibration-target" style="left:${target.x.toFixed(1)}px;top:${target.y.toFixed(1)}px"></div>`,
      );
      parts.push(`<div id="calibration-progress">${(wizard.progress * 100).toFixed(0)}%</div>`);
    } else if (wizard.phase === "refused") {
      parts.push(`<div id="calibration-refused">sensor not connected</div>`);
    }
    if (session.calibrationProfile) {
      const profile = session.calibrationProfile;
      parts.push(
        `<div id="calibration-result">yaw [${profile.yaw_min}, ${profile.yaw_max}] ` +
          `pitch [${profile.pitch_min}, ${profile.pitch_max}]</div>`,
      );
    }
  }

  if (session.lastError) {
    parts.push(`<div id="last-error">${escapeHtml(session.lastError)}</div>`);
  }

  if (session.sessionEnded) {
    parts.push(`<div id="session-ended">session ended</div>`);
  }
  if (session.revealed && session.partOrder) {
    parts.push(
      `<div id="reveal">part order: ${session.partOrder.map(escapeHtml).join(", ")}</div>`,
    );
  }
  parts.push(
    `<button id="export"${session.exportReady() ? "" : " disabled"}>export log</button>`,
  );
  return `<div id="console-root">${parts.join("\n")}</div>`;
}

export function mount(container: { innerHTML: string }, session: ConsoleSession,
                      wizard: CalibrationWizard | null): void {
  container.innerHTML = renderHtml(session, wizard);
}
