// DOM rendering. This layer only draws the view model and wires
// events to the handlers; it holds no game state and does no fetching.

import type { BoardViewModel } from "./composer.js";
import {
  consolidateAmounts,
  hintSummary,
  legalAmountsForHeap,
  moveLabel,
} from "./composer.js";
import type { HintResponse, MoveDoc } from "./model.js";

export interface UiState {
  vm: BoardViewModel;
  selectedHeap: number | null;
  composeConsolidate: boolean;
  previewMove: MoveDoc | null;
  previewText: string | null;
  hint: HintResponse | null;
  inlineError: string | null;
  offline: boolean;
  busy: boolean;
  // index into history being viewed, or null for the live position
  scrubIndex: number | null;
}

export interface Handlers {
  selectHeap(index: number | null): void;
  toggleConsolidate(): void;
  hoverMove(move: MoveDoc | null): void;
  playMove(move: MoveDoc): void;
  tryCustomAmount(heapIndex: number | null, amount: number): void;
  requestHint(): void;
  dismissHint(): void;
  retry(): void;
  scrub(index: number | null): void;
  newGame(): void;
}

function el(
  tag: string,
  className?: string,
  text?: string,
): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function sameMove(a: MoveDoc, b: MoveDoc): boolean {
  return (
    a.type === b.type &&
    a.amount === b.amount &&
    (a.type === "consolidate_reduce" || a.heapIndex === b.heapIndex)
  );
}

function renderBanners(state: UiState, handlers: Handlers): HTMLElement {
  const box = el("div", "banners");
  if (state.offline) {
    const banner = el(
      "div",
      "banner banner-offline",
      "connection lost; the board is read-only ",
    );
    const retry = el("button", "retry", "retry") as HTMLButtonElement;
    retry.addEventListener("click", () => handlers.retry());
    banner.appendChild(retry);
    box.appendChild(banner);
  }
  if (state.vm.finished && state.vm.winnerText) {
    box.appendChild(el("div", "banner banner-winner", state.vm.winnerText));
  }
  return box;
}

function renderHeaps(state: UiState, handlers: Handlers): HTMLElement {
  const vm = state.vm;
  const row = el("div", "heaps");
  const interactive =
    vm.humanTurn && !state.offline && !state.busy && state.scrubIndex === null;
  const hintMove = state.hint?.move ?? null;
  vm.heapCards.forEach((card) => {
    const btn = el("button", "heap-card") as HTMLButtonElement;
    btn.appendChild(el("div", "heap-value", String(card.value)));
    btn.appendChild(el("div", "heap-subtitle", card.subtitle));
    if (state.selectedHeap === card.index) btn.classList.add("selected");
    if (
      hintMove &&
      hintMove.type === "reduce" &&
      hintMove.heapIndex === card.index
    ) {
      btn.classList.add("hinted");
    }
    btn.disabled = !interactive || !card.reducible;
    btn.addEventListener("click", () => handlers.selectHeap(card.index));
    row.appendChild(btn);
  });
  return row;
}

function renderAmountChips(
  state: UiState,
  handlers: Handlers,
  moves: MoveDoc[],
): HTMLElement {
  const box = el("div", "chips");
  const hintMove = state.hint?.move ?? null;
  moves.forEach((move) => {
    const chip = el("button", "chip", String(move.amount)) as HTMLButtonElement;
    if (hintMove && sameMove(move, hintMove)) chip.classList.add("hinted");
    if (state.previewMove && sameMove(move, state.previewMove)) {
      chip.classList.add("previewing");
    }
    chip.disabled = state.busy || state.offline;
    chip.addEventListener("mouseenter", () => handlers.hoverMove(move));
    chip.addEventListener("mouseleave", () => handlers.hoverMove(null));
    chip.addEventListener("focus", () => handlers.hoverMove(move));
    chip.addEventListener("click", () => handlers.playMove(move));
    box.appendChild(chip);
  });
  return box;
}

function renderComposer(state: UiState, handlers: Handlers): HTMLElement {
  const vm = state.vm;
  const box = el("div", "composer");
  if (!vm.humanTurn || state.scrubIndex !== null) {
    const note = vm.finished
      ? "game over"
      : state.scrubIndex !== null
        ? "viewing history"
        : `waiting for ${vm.seatToMove}`;
    box.appendChild(el("div", "composer-note", note));
    return box;
  }

  if (state.selectedHeap !== null) {
    box.appendChild(
      el(
        "div",
        "composer-label",
        `subtract from heap ${state.selectedHeap}:`,
      ),
    );
    const moves: MoveDoc[] = legalAmountsForHeap(
      vm.legalMoves,
      state.selectedHeap,
    ).map((amount) => ({
      type: "reduce",
      heapIndex: state.selectedHeap!,
      amount,
    }));
    box.appendChild(renderAmountChips(state, handlers, moves));
  } else {
    box.appendChild(
      el("div", "composer-label", "pick a heap to reduce"),
    );
  }

  if (vm.canConsolidate) {
    const toggle = el(
      "button",
      "consolidate-toggle",
      "consolidate all heaps, then subtract",
    ) as HTMLButtonElement;
    if (state.composeConsolidate) toggle.classList.add("selected");
    toggle.disabled = state.busy || state.offline;
    toggle.addEventListener("click", () => handlers.toggleConsolidate());
    box.appendChild(toggle);
    if (state.composeConsolidate) {
      const moves: MoveDoc[] = consolidateAmounts(vm.legalMoves).map(
        (amount) => ({ type: "consolidate_reduce", amount }),
      );
      box.appendChild(renderAmountChips(state, handlers, moves));
    }
  }

  if (state.previewText) {
    box.appendChild(el("div", "preview-badge", state.previewText));
  }

  const custom = el("div", "custom-amount");
  custom.appendChild(el("span", "composer-label", "or try any amount:"));
  const input = el("input", "custom-input") as HTMLInputElement;
  input.type = "number";
  input.min = "1";
  const go = el("button", "custom-go", "try") as HTMLButtonElement;
  go.disabled = state.busy || state.offline;
  go.addEventListener("click", () => {
    const amount = Number(input.value);
    if (!Number.isInteger(amount)) return;
    handlers.tryCustomAmount(
      state.composeConsolidate ? null : state.selectedHeap,
      amount,
    );
  });
  custom.appendChild(input);
  custom.appendChild(go);
  box.appendChild(custom);

  if (state.inlineError) {
    box.appendChild(el("div", "inline-error", state.inlineError));
  }
  return box;
}

function renderProductPanel(state: UiState): HTMLElement {
  const p = state.vm.product;
  const box = el("div", "panel product-panel");
  box.appendChild(el("h3", undefined, "analysis"));
  box.appendChild(el("div", "product-line", `product: ${p.productLabel}`));
  const badge = el(
    "span",
    `outcome-badge outcome-${p.outcome.toLowerCase()}`,
    `${p.outcome}: ${p.outcomeText}`,
  );
  box.appendChild(badge);
  if (p.stranded) {
    box.appendChild(el("span", "stranded-badge", "stranded"));
  }
  if (p.grundyLabel !== null) {
    box.appendChild(el("div", "analysis-line", `grundy value: ${p.grundyLabel}`));
  }
  if (p.mumberLabel !== null) {
    box.appendChild(el("div", "analysis-line", `mumber: ${p.mumberLabel}`));
  }
  return box;
}

function renderCrtPanel(state: UiState): HTMLElement | null {
  const rows = state.vm.crtRows;
  if (!rows) return null;
  const box = el("div", "panel crt-panel");
  box.appendChild(el("h3", undefined, "state vector"));
  const table = el("table") as HTMLTableElement;
  const head = el("tr");
  head.appendChild(el("th", undefined, "factor"));
  state.vm.heapCards.forEach((c) =>
    head.appendChild(el("th", undefined, `heap ${c.index}`)),
  );
  head.appendChild(el("th", undefined, "component"));
  table.appendChild(head);
  rows.forEach((row) => {
    const tr = el("tr");
    tr.appendChild(el("td", undefined, `mod ${row.factor}`));
    row.heapResidues.forEach((r) =>
      tr.appendChild(el("td", undefined, String(r))),
    );
    tr.appendChild(el("td", "crt-component", String(row.component)));
    table.appendChild(tr);
  });
  box.appendChild(table);
  return box;
}

function renderHintDrawer(state: UiState, handlers: Handlers): HTMLElement {
  const box = el("div", "panel hint-drawer");
  const header = el("h3", undefined, "hint");
  box.appendChild(header);
  if (!state.hint) {
    const btn = el("button", "hint-button", "request a hint") as HTMLButtonElement;
    btn.disabled =
      !state.vm.humanTurn ||
      state.offline ||
      state.busy ||
      state.scrubIndex !== null;
    btn.addEventListener("click", () => handlers.requestHint());
    box.appendChild(btn);
    return box;
  }
  const hint = state.hint;
  if (hint.move) {
    box.appendChild(el("div", "hint-move", moveLabel(hint.move)));
  }
  box.appendChild(el("div", "hint-summary", hintSummary(hint.explanation)));
  box.appendChild(el("p", "hint-text", hint.explanation.text));
  const ex = hint.explanation;
  const details = el("dl", "hint-details");
  const addDetail = (label: string, value: unknown) => {
    if (value === undefined || value === null) return;
    details.appendChild(el("dt", undefined, label));
    details.appendChild(el("dd", undefined, String(value)));
  };
  addDetail("co-product", ex.coproduct);
  addDetail("inverse", ex.inverse);
  addDetail("target residue", ex.targetResidue);
  addDetail("product element", ex.productElement);
  addDetail("inverse element", ex.inverseElement);
  addDetail("target element", ex.targetElement);
  addDetail("target polynomial", ex.targetPolynomial);
  addDetail("consolidated heap", ex.consolidatedHeap);
  addDetail("target", ex.target);
  if (details.childNodes.length > 0) box.appendChild(details);
  const dismiss = el("button", "hint-dismiss", "dismiss") as HTMLButtonElement;
  dismiss.addEventListener("click", () => handlers.dismissHint());
  box.appendChild(dismiss);
  return box;
}

function renderHistory(state: UiState, handlers: Handlers): HTMLElement {
  const box = el("div", "panel history-panel");
  box.appendChild(el("h3", undefined, "history"));
  if (state.scrubIndex !== null) {
    const back = el("button", "back-to-live", "back to live") as HTMLButtonElement;
    back.addEventListener("click", () => handlers.scrub(null));
    box.appendChild(back);
  }
  const list = el("ol", "history-list");
  state.vm.historyLines.forEach((line, i) => {
    const item = el("li");
    const btn = el("button", "history-entry", line) as HTMLButtonElement;
    if (state.scrubIndex === i) btn.classList.add("selected");
    btn.addEventListener("click", () => handlers.scrub(i));
    item.appendChild(btn);
    list.appendChild(item);
  });
  if (!state.vm.historyLines.length) {
    box.appendChild(el("div", "history-empty", "no moves yet"));
  }
  box.appendChild(list);
  return box;
}

export function render(
  root: HTMLElement,
  state: UiState,
  handlers: Handlers,
): void {
  root.textContent = "";
  root.appendChild(renderBanners(state, handlers));

  const header = el("div", "board-header");
  header.appendChild(el("h2", undefined, `multiplicative nim, ${state.vm.title}`));
  const turn = state.vm.finished
    ? ""
    : state.scrubIndex !== null
      ? `viewing move ${state.scrubIndex + 1} of ${state.vm.historyLines.length}`
      : `${state.vm.seatToMove} to move`;
  header.appendChild(el("div", "turn-line", turn));
  const fresh = el("button", "new-game", "new game") as HTMLButtonElement;
  fresh.addEventListener("click", () => handlers.newGame());
  header.appendChild(fresh);
  root.appendChild(header);

  if (state.scrubIndex !== null) {
    // historical snapshot: plain heap values, no affordances
    const snap = el("div", "heaps snapshot");
    const line = state.vm.historyLines[state.scrubIndex];
    snap.appendChild(el("div", "snapshot-line", line));
    root.appendChild(snap);
  } else {
    root.appendChild(renderHeaps(state, handlers));
  }

  root.appendChild(renderComposer(state, handlers));

  const panels = el("div", "panels");
  panels.appendChild(renderProductPanel(state));
  const crt = renderCrtPanel(state);
  if (crt) panels.appendChild(crt);
  panels.appendChild(renderHintDrawer(state, handlers));
  panels.appendChild(renderHistory(state, handlers));
  root.appendChild(panels);
}
