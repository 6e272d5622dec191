/**
 * Score panel: renders the server's numbers verbatim, with accept/undo
 * buttons wired by main.ts.  The only formatting applied client-side is
 * the percentage suffix.
 */

import type { PanelStrings } from "./state";

export function renderScoreRows(target: HTMLElement, title: string, strings: PanelStrings | null): void {
  if (!strings) {
    target.innerHTML = `<h3>${title}</h3><p class="empty">no data</p>`;
    return;
  }
  target.innerHTML = `
    <h3>${title}</h3>
    <table>
      <tr><td>D</td><td data-field="D">${strings.D}</td></tr>
      <tr><td>V&#771;</td><td data-field="v_norm">${strings.v_norm}</td></tr>
      <tr><td>L&#771;</td><td data-field="l_norm">${strings.l_norm}</td></tr>
      <tr><td>S</td><td data-field="S">${strings.S}</td></tr>
      <tr><td>D change</td><td data-field="dChange">${strings.dChange}</td></tr>
      <tr><td>S change</td><td data-field="sChange">${strings.sChange}</td></tr>
    </table>`;
}

export function renderNotice(target: HTMLElement, message: string): void {
  target.innerHTML = `<p class="notice">${message}</p>`;
}
