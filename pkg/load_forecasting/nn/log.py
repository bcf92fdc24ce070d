""" Terminal reporting of training progress and experiment results. """

import logging
from typing import List, Optional, Sequence

from click import style
from columnar import columnar

_logger = logging.getLogger(__name__)


def make_table_row(name: str,
                   current: float,
                   past: Optional[float],
                   abs_format: str = ".4E",
                   inc_format: str = "+0.2E",
                   pc_format: str = "+0.2%",
                   colors: bool = True,
                   lower_is_better: bool = True) -> List[str]:
    """ Makes a row for a `columnar` table.

    Information in the row: name of the attribute; current value of the
    attribute; past value of the attribute; how much the attribute increased
    (absolute and percentage).
    """
    if past is None:
        return [name, f"{current:{abs_format}}", "-", "-", "-"]

    improving = current < past if lower_is_better else current > past
    worsening = current > past if lower_is_better else current < past
    color = "green" if improving else "red" if worsening else "white"

    inc = f"{current - past:{inc_format}}"
    pc = float("inf") if past == 0 else (current - past) / abs(past)
    inc_pc = f"{pc:{pc_format}}"
    if colors:
        inc = style(inc, fg=color)
        inc_pc = style(inc_pc, fg=color)

    return [name, f"{current:{abs_format}}", f"{past:{abs_format}}", inc, inc_pc]


class StandardOutLogger():
    """ Prints a table of the training and validation loss, comparing the
    current epoch against the previously logged one.
    """

    TAB_HEADER = ["NAME", "CURRENT", "PAST", "INCREASE", "INCREASE (%)"]

    def __init__(self, log_interval: int = 100, colored_text: bool = True, silent: bool = False):
        self.log_interval = log_interval
        self.colored_text = colored_text
        self.silent = silent

        self.curr_train_error = None
        self.past_train_error = None
        self.curr_val_error = None
        self.past_val_error = None

    def log(self, epoch: int, train_loss: float, val_loss: float, force: bool = False) -> Optional[str]:
        self.curr_train_error = train_loss
        self.curr_val_error = val_loss
        if self.silent or not (force or epoch % self.log_interval == 0):
            return None

        data = [
            make_table_row('Training Error', self.curr_train_error, self.past_train_error,
                           colors=self.colored_text),
            make_table_row('Validation Error', self.curr_val_error, self.past_val_error,
                           colors=self.colored_text),
        ]
        table = columnar(data, headers=self.TAB_HEADER, no_borders=False,
                         justify=['r', 'c', 'c', 'c', 'c'])
        print(f"epoch {epoch}")
        print(table)
        self.post_update_data()
        return table

    def post_update_data(self):

        if self.curr_train_error is not None:
            self.past_train_error = self.curr_train_error

        if self.curr_val_error is not None:
            self.past_val_error = self.curr_val_error


def results_table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    """ Formats experiment results (one row per grid cell) as a `columnar` table. """
    data = [[f"{v:.4f}" if isinstance(v, float) else str(v) for v in row] for row in rows]
    return columnar(data, headers=list(headers), no_borders=False, justify='c')
