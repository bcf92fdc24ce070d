from math import inf


class EarlyStopping:
    """Stop early when the validation loss has stopped improving.

    Training halts once `patience` consecutive epochs fail to improve on the
    best loss seen so far. Only a strictly lower loss counts as an improvement.
    """

    def __init__(self, patience=25):

        if patience < 1:
            raise ValueError(f'patience should be >= 1, got {patience}.')

        self.keep_going = True # indicates to the training loop whether to continue training
        self.patience = patience
        self.best = inf
        self.best_epoch = None
        self.num_bad_epochs = 0
        self.last_epoch = 0

    def step(self, metrics):
        """Records one epoch's loss; returns True if it is the new best."""
        current = float(metrics)

        self.last_epoch += 1

        improved = current < self.best
        if improved:
            self.best = current
            self.best_epoch = self.last_epoch
            self.num_bad_epochs = 0
        else:
            self.num_bad_epochs += 1

        if self.num_bad_epochs >= self.patience:
            self.keep_going = False
        return improved
