public class Account {
    private long balanceCents;

    public void deposit(long cents) {
        balanceCents += cents;
    }

    public void withdraw(long cents) {
        balanceCents -= cents;
    }

    public long balance() {
        return balanceCents;
    }
}
