// DOM wiring: lobby form, table rendering, card picker, action submission.

import { cardLabel, isRed, isWild } from "./cards.js";
import { candidatesForSelection, passIndex, playableCodes } from "./picker.js";
import { WireAction, isPass } from "./protocol.js";
import { Session } from "./session.js";
import { TableState } from "./state.js";

const $ = (id: string) => document.getElementById(id) as HTMLElement;

let session: Session;
let selected: string[] = [];   // selected card codes (tile order)

function describeAction(action: WireAction | null): string {
  if (action === null) return "-";
  if (isPass(action)) return "PASS";
  return `${action[0]} ${action[1]}: ${(action[2] as string[]).join(" ")}`;
}

function seatName(state: TableState, seat: number): string {
  if (seat === state.myPos) return `seat ${seat} (you)`;
  if (state.myPos !== null && seat === ((state.myPos + 2) & 3)) {
    return `seat ${seat} (partner)`;
  }
  return `seat ${seat}`;
}

function render(state: TableState): void {
  $("lobby").style.display = state.phase === "lobby" ? "block" : "none";
  $("table").style.display = state.phase === "lobby" ? "none" : "block";
  $("banner").textContent = state.banner;
  $("error").textContent = state.error ?? "";
  $("levels").textContent =
    `our level ${state.selfRank} | their level ${state.oppoRank} | ` +
    `round level ${state.curRank}` +
    (state.series ? ` | match ${state.series.cur}/${state.series.total}` : "");

  for (let seat = 0; seat < 4; seat++) {
    const panel = $(`seat${seat}`);
    if (state.myPos === null) continue;
    const rest = state.rest[seat];
    const finished = state.finishOrder.indexOf(seat);
    const badge = finished >= 0 ? ` [#${finished + 1}]` : "";
    panel.querySelector(".seat-name")!.textContent = seatName(state, seat) + badge;
    panel.querySelector(".seat-rest")!.textContent =
      rest === null ? "" : `${rest} cards`;
    panel.querySelector(".seat-last")!.textContent =
      describeAction(state.lastAction[seat]);
    panel.classList.toggle("greater", state.greaterPos === seat);
    panel.classList.toggle(
      "to-act",
      state.request !== null && seat === state.myPos,
    );
  }
  $("greater").textContent = state.greaterAction === null
    ? "table is open"
    : `to beat: ${describeAction(state.greaterAction)} (seat ${state.greaterPos})`;

  renderHand(state);
  renderActions(state);
  renderLog(state);
}

function renderHand(state: TableState): void {
  const handDiv = $("hand");
  handDiv.innerHTML = "";
  const playable = state.request !== null && state.request.stage === "play"
    ? playableCodes(state.request.actionList)
    : null;
  const counts = new Map<string, number>();
  for (const code of state.hand) {
    const copy = counts.get(code) ?? 0;
    counts.set(code, copy + 1);
    const tile = document.createElement("button");
    tile.className = "card" + (isRed(code) ? " red" : "");
    if (isWild(code, state.curRank)) tile.classList.add("wild");
    tile.textContent = cardLabel(code);
    tile.dataset.code = code;
    if (selectedCount(code) > copy) tile.classList.add("selected");
    if (playable !== null && !playable.has(code)) tile.classList.add("dim");
    tile.onclick = () => toggleCard(code);
    handDiv.appendChild(tile);
  }
}

function selectedCount(code: string): number {
  return selected.filter((c) => c === code).length;
}

// clicking adds one more copy of the code while any remain, then removes one
function toggleCard(code: string): void {
  if (session.state.request?.stage !== "play") return;
  const copies = session.state.hand.filter((c) => c === code).length;
  const i = selected.indexOf(code);
  if (selectedCount(code) < copies) {
    selected.push(code);
  } else if (i >= 0) {
    selected.splice(i, 1);
  }
  render(session.state);
}

function renderActions(state: TableState): void {
  const box = $("actions");
  box.innerHTML = "";
  const request = state.request;
  if (request === null) {
    $("picker-hint").textContent = "";
    return;
  }
  if (request.stage !== "play") {
    $("picker-hint").textContent = request.stage === "tribute"
      ? "choose the card to surrender"
      : "choose the card to return";
    request.actionList.forEach((action, index) => {
      const btn = document.createElement("button");
      const code = (action[2] as string[])[0];
      btn.className = "action-btn" + (isRed(code) ? " red" : "");
      btn.textContent = cardLabel(code);
      btn.onclick = () => submit(index);
      box.appendChild(btn);
    });
    return;
  }
  $("picker-hint").textContent =
    "select cards, then pick an interpretation";
  const pass = passIndex(request.actionList);
  if (pass !== null) {
    const btn = document.createElement("button");
    btn.className = "action-btn pass";
    btn.textContent = "PASS";
    btn.onclick = () => submit(pass);
    box.appendChild(btn);
  }
  const candidates = candidatesForSelection(request.actionList, selected);
  for (const { index, action } of candidates) {
    const btn = document.createElement("button");
    btn.className = "action-btn";
    btn.textContent = `${action[0]} (${action[1]})`;
    btn.onclick = () => submit(index);
    box.appendChild(btn);
  }
  if (selected.length > 0 && candidates.length === 0) {
    const hint = document.createElement("span");
    hint.className = "nomatch";
    hint.textContent = "selection forms no listed action";
    box.appendChild(hint);
  }
  const clear = document.createElement("button");
  clear.className = "action-btn clear";
  clear.textContent = "clear";
  clear.onclick = () => {
    selected = [];
    render(session.state);
  };
  box.appendChild(clear);
}

function submit(index: number): void {
  if (session.submit(index)) {
    selected = [];
  }
}

function renderLog(state: TableState): void {
  const log = $("log");
  log.innerHTML = "";
  for (const line of state.log.slice(-30)) {
    const div = document.createElement("div");
    div.textContent = line;
    log.appendChild(div);
  }
  log.scrollTop = log.scrollHeight;
}

function defaultUrl(): string {
  const proto = location.protocol === "https:" ? "wss://" : "ws://";
  return proto + location.host;
}

export function boot(): void {
  session = new Session(render);
  ($("server") as HTMLInputElement).value = defaultUrl();
  $("connect").onclick = () => {
    const create = ($("mode") as HTMLSelectElement).value === "create";
    session.connect(($("server") as HTMLInputElement).value, {
      userId: ($("user") as HTMLInputElement).value || "player",
      seatNum: parseInt(($("seat") as HTMLInputElement).value, 10) || 0,
      create,
      rounds: parseInt(($("rounds") as HTMLInputElement).value, 10) || 1,
      roomId: parseInt(($("room") as HTMLInputElement).value, 10) || 1,
    });
  };
  render(session.state);
}

boot();
