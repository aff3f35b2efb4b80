// Pure view-model construction and move-composer logic. Everything in
// this module is a function of server documents; no arithmetic on heap
// values happens here beyond equality and membership checks, so the
// board can never disagree with the engine's analysis.

import type {
  AnalysisView,
  HintExplanation,
  HistoryEntry,
  MoveDoc,
  Outcome,
  SessionDoc,
} from "./model.js";

export interface HeapCard {
  index: number;
  value: number;
  // numeric: "h = r (mod m)"; poly: polynomial with optional power
  subtitle: string;
  reducible: boolean;
}

export interface ProductPanel {
  productLabel: string;
  outcome: Outcome;
  outcomeText: string;
  stranded: boolean;
  mumberLabel: string | null;
  grundyLabel: string | null;
}

export interface CrtRow {
  factor: number;
  component: number;
  heapResidues: number[];
}

export interface BoardViewModel {
  sessionId: string;
  variant: SessionDoc["variant"];
  title: string;
  heapCards: HeapCard[];
  product: ProductPanel;
  crtRows: CrtRow[] | null;
  historyLines: string[];
  humanTurn: boolean;
  seatToMove: string;
  finished: boolean;
  winnerText: string | null;
  legalMoves: MoveDoc[];
  canConsolidate: boolean;
  hintAvailable: boolean;
}

export function outcomeText(outcome: Outcome): string {
  return outcome === "P"
    ? "losing for the player to move"
    : "winning for the player to move";
}

export function moveLabel(move: MoveDoc): string {
  if (move.type === "reduce") {
    return `reduce heap ${move.heapIndex} by ${move.amount}`;
  }
  return `consolidate, then subtract ${move.amount}`;
}

export function historyLine(entry: HistoryEntry): string {
  return `${entry.player}: ${moveLabel(entry.move)} -> [${entry.heaps.join(", ")}]`;
}

function heapSubtitle(session: SessionDoc, index: number): string {
  const detail = session.analysis.heapDetails[index];
  if (session.variant === "numeric") {
    return `= ${detail.residue} (mod ${session.analysis.modulus})`;
  }
  const power = detail.power === null || detail.power === undefined ? "" : ` = x^${detail.power}`;
  return `${detail.polynomial}${power}`;
}

function productLabel(view: AnalysisView): string {
  if (view.variant === "numeric") {
    return `${view.productInteger} = ${view.product} (mod ${view.modulus})`;
  }
  const power =
    view.productPower === null || view.productPower === undefined
      ? ""
      : `, x^${view.productPower}`;
  return `${view.product} (${view.productPolynomial}${power})`;
}

export function buildViewModel(session: SessionDoc): BoardViewModel {
  const view = session.analysis;
  const reducibleIndexes = new Set(
    session.legalMoves
      .filter((mv) => mv.type === "reduce")
      .map((mv) => mv.heapIndex),
  );
  const heapCards: HeapCard[] = session.heaps.map((value, index) => ({
    index,
    value,
    subtitle: heapSubtitle(session, index),
    reducible: reducibleIndexes.has(index),
  }));

  let crtRows: CrtRow[] | null = null;
  if (view.stateVector !== null) {
    crtRows = view.stateVector.factors.map((factor, j) => ({
      factor,
      component: view.stateVector!.components[j],
      heapResidues: view.heapDetails.map((d) => (d.factorResidues ?? [])[j]),
    }));
  }

  const title =
    session.variant === "numeric"
      ? `mod ${session.modulus}`
      : `F(${session.field!.p}^${session.field!.n})`;

  const finished = session.status === "won";
  return {
    sessionId: session.id,
    variant: session.variant,
    title,
    heapCards,
    product: {
      productLabel: productLabel(view),
      outcome: view.outcome,
      outcomeText: outcomeText(view.outcome),
      stranded: view.stranded,
      mumberLabel:
        view.mumber === null
          ? null
          : `${view.mumber.value} (${view.mumber.policy})`,
      grundyLabel: view.grundy === null ? null : String(view.grundy),
    },
    crtRows,
    historyLines: session.history.map(historyLine),
    humanTurn: !finished && session.playerToMove !== "engine",
    seatToMove: session.playerToMove,
    finished,
    winnerText: finished ? `${session.winner} wins` : null,
    legalMoves: session.legalMoves,
    canConsolidate: session.legalMoves.some(
      (mv) => mv.type === "consolidate_reduce",
    ),
    hintAvailable: view.hintAvailable,
  };
}

// Amounts the composer may offer for one heap: exactly the server's
// legal reduce moves, so a submission can never be rejected.
export function legalAmountsForHeap(
  legalMoves: MoveDoc[],
  heapIndex: number,
): number[] {
  return legalMoves
    .filter((mv) => mv.type === "reduce" && mv.heapIndex === heapIndex)
    .map((mv) => mv.amount)
    .sort((a, b) => a - b);
}

export function consolidateAmounts(legalMoves: MoveDoc[]): number[] {
  return legalMoves
    .filter((mv) => mv.type === "consolidate_reduce")
    .map((mv) => mv.amount)
    .sort((a, b) => a - b);
}

export function isLegal(legalMoves: MoveDoc[], move: MoveDoc): boolean {
  return legalMoves.some(
    (mv) =>
      mv.type === move.type &&
      mv.amount === move.amount &&
      (mv.type === "consolidate_reduce" || mv.heapIndex === move.heapIndex),
  );
}

// What-if badge: the preview position's outcome is for the opponent,
// who moves next on it.
export function previewBadge(preview: AnalysisView): string {
  const shown =
    preview.variant === "numeric"
      ? String(preview.product)
      : preview.productPolynomial!;
  const verdict =
    preview.outcome === "P" ? "losing for opponent" : "winning for opponent";
  return `product → ${shown}, ${verdict}`;
}

export function hintSummary(explanation: HintExplanation): string {
  if (explanation.kind === "losing") {
    return "no winning move exists";
  }
  if (explanation.kind === "direct") {
    return `reduce heap ${explanation.heapIndex} to reach target ${
      explanation.targetResidue ?? explanation.targetElement
    }`;
  }
  return `consolidate into ${explanation.consolidatedHeap}, then subtract ${explanation.amount}`;
}
