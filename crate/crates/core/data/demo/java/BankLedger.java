public class BankLedger {
    private int balance;
    private int operations;

    BankLedger(int opening) {
        balance = opening;
        operations = 0;
    }

    boolean deposit(int amount) {
        if (amount <= 0) {
            return false;
        }
        balance = balance + amount;
        operations++;
        return true;
    }

    boolean withdraw(int amount) {
        if (amount <= 0 || amount > balance) {
            return false;
        }
        balance = balance - amount;
        operations++;
        return true;
    }

    int applyInterest(int ratePercent, int years) {
        for (int year = 0; year < years; year++) {
            int interest = balance * ratePercent / 100;
            deposit(interest);
        }
        return balance;
    }

    static boolean transfer(BankLedger source, BankLedger target, int amount) {
        if (source.withdraw(amount)) {
            target.deposit(amount);
            return true;
        }
        return false;
    }

    String describe(String owner) {
        return owner + ": balance " + balance + " after " + operations + " operations";
    }

    public static void main(String[] args) {
        BankLedger alice = new BankLedger(500);
        BankLedger bob = new BankLedger(120);
        for (int i = 1; i < 6; i++) {
            boolean ok = transfer(alice, bob, i * 40);
            System.out.println("transfer " + i * 40 + " " + ok + " " + alice.balance + " " + bob.balance);
        }
        System.out.println(bob.withdraw(10000) + " " + alice.deposit(-5));
        System.out.println(alice.applyInterest(5, 4) + " " + bob.applyInterest(3, 2));
        System.out.println(alice.describe("alice"));
        System.out.println(bob.describe("bob"));
    }
}
